#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "imgrx/config.hpp"
#include "imgrx/optimizer.hpp"

namespace imgrx::cli {

// Margins of a feasible solution against each constraint.
struct Slack {
  double snr_margin_db = 0.0;
  double pd_side_above_min = 0.0;  // m
  double pd_side_below_max = 0.0;  // m
  double fov_margin_deg = 0.0;     // FOV at L_hi minus the requirement

  bool operator==(const Slack&) const = default;
};

struct Calibration {
  double transit_constant = 0.0;  // C_t
  double ax = 0.0;                // m^3, for the reported configuration
  double snr_required = 0.0;
  double gap = 0.0;
  double x3 = 0.0;
  double x5 = 0.0;
  double d_delta = 0.0;            // m, for the reported configuration
  double reference_d_delta = 0.0;  // m, N_PD = 49 and N_a = 64
  double reference_ratio = 0.0;    // reference_d_delta / 44.81 um

  bool operator==(const Calibration&) const = default;
};

struct DesignReport {
  DesignConfig config;
  std::string scheme;
  DesignSolution solution;
  std::optional<Slack> slack;
  Calibration calibration;
  int configurations = 0;
  int feasible_configurations = 0;

  bool operator==(const DesignReport&) const = default;
};

nlohmann::json config_to_json(const DesignConfig& config);
DesignConfig config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DesignReport& report);
DesignReport report_from_json(const nlohmann::json& j);

std::string summary(const DesignReport& report);

}  // namespace imgrx::cli
