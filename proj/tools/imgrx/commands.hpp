#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "report.hpp"

namespace imgrx::cli {

enum ExitCode : int { Success = 0, Infeasible = 2, ConfigFailure = 3, CheckFailure = 4 };

struct Options {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  bool json = false;
  bool summary = false;
  std::optional<int> n_pd;
  std::optional<int> n_a;

  // sweep
  double fov_min = 10.0;
  double fov_max = 40.0;
  double fov_step = 1.0;
  bool best_only = false;

  // snr-curve
  std::string combiner = "both";
  std::optional<std::uint64_t> mc_samples;  // snr-curve default 1e4, validate default 1e5
  std::optional<double> d_um;
  int points = 41;

  // feasible
  int grid_d = 100;
  int grid_l = 100;
};

// Loads --config (or the built-in defaults) and applies --n-pd / --n-a.
DesignConfig resolve_config(const Options& options);

DesignReport make_report(const DesignConfig& config);

// Each command writes its primary output to `out` and notes to `err`; returns an ExitCode.
int cmd_design(const Options& options, std::ostream& out, std::ostream& err);
int cmd_sweep(const Options& options, std::ostream& out, std::ostream& err);
int cmd_snr_curve(const Options& options, std::ostream& out, std::ostream& err);
int cmd_feasible(const Options& options, std::ostream& out, std::ostream& err);
int cmd_validate(const Options& options, std::ostream& out, std::ostream& err);

// Full command line entry point; `out` is replaced by --out when given.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// RFC 4180 field quoting and 9-significant-digit locale-independent numbers.
std::string csv_field(const std::string& text);
std::string csv_number(double value);
std::string csv_row(const std::vector<std::string>& fields);

}  // namespace imgrx::cli
