#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "imgrx/optimizer.hpp"

namespace imgrx {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

// Hardware defaults with the link budget derived from the transmitter.
DesignSpace default_design_space();

// Per-lens power (at 64 lenses) that puts d_Delta(N_PD = 49, N_a = 64) at 44.81 um.
double calibrated_lens_power(OuterGain gain);

// Default hardware with the calibrated link budget and N_a enumerated over 1..64 squares.
DesignSpace calibrated_design_space(OuterGain gain);

struct AcceptanceOptions {
  DesignSpace space = default_design_space();
  // Used by the trade-off sweep, where the raw link budget leaves nothing feasible.
  DesignSpace sweep_space = calibrated_design_space(OuterGain::Linear);
  std::uint64_t seed = 20240611;
  std::uint64_t mc_samples = 100000;
  int grid_steps = 400;
  int random_configs = 50;
  int random_placements = 1000;
  int random_contexts = 100;
  double fov_min_deg = 10.0;
  double fov_max_deg = 40.0;
};

std::vector<CheckResult> run_acceptance(const AcceptanceOptions& options);

// d_Delta for N_PD = 49, N_a = 64 under the space's link budget, and its ratio to 44.81 um.
struct CalibrationDiagnostic {
  double d_delta = 0.0;
  double ratio = 0.0;
};
CalibrationDiagnostic calibration_diagnostic(const DesignSpace& space,
                                             const DesignConstraints& constraints);

// Randomized problem around `base` materials and optics, used by the oracle-equivalence check.
DesignProblem random_problem(std::mt19937_64& rng, const DesignSpace& base, const Scheme& scheme);

}  // namespace imgrx
