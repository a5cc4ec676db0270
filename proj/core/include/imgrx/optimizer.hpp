#pragma once

#include <optional>
#include <string>
#include <vector>

#include "imgrx/modulation.hpp"
#include "imgrx/optics.hpp"
#include "imgrx/snr.hpp"

namespace imgrx {

struct DesignConstraints {
  double fov_req_deg = 15.0;
  double ber = 1e-3;
  double d_min = 10e-6;
  double ff_target = 0.64;
  std::optional<double> snr_required_override;

  void validate() const;
};

// One (N_PD, N_a) configuration with its optics.
struct DesignContext {
  SnrContext snr;
  BeamSpotModel spot;
  FovModel fov;

  void validate() const;
};

enum class FailedConstraint { None, FieldOfView, SideBounds, Snr };

const char* to_string(FailedConstraint f);

struct DesignSolution {
  bool feasible = false;
  double pd_side = 0.0;  // d_opt
  double distance_lo = 0.0;
  double distance_hi = 0.0;
  Regime regime = Regime::SmallSpot;
  std::string case_id;
  double rate = 0.0;
  double snr = 0.0;
  int pd_count = 0;
  int outer_count = 0;
  FailedConstraint failed = FailedConstraint::None;
  std::string diagnostic;

  bool operator==(const DesignSolution&) const = default;
};

// Thresholds that bound the closed-form solutions. Functions of L take metres.
struct CriticalSides {
  double ax = 0.0;
  double snr_required = 0.0;
  double gap = 0.0;  // Gamma, only meaningful for DCO-OFDM
  double array_side = 0.0;
  double d_max = 0.0;
  BeamSpotModel spot;

  double d_delta() const;
  double d_lambda(double distance) const;
  double d_g(double distance) const;
  double d_star() const;
  double d_star2(double distance) const;
  double d_star3(double distance) const;
};

// Objective and constraint predicates shared by the optimizer, feasible_region and the oracle.
class DesignProblem {
 public:
  DesignProblem(DesignContext context, DesignConstraints constraints, Scheme scheme);

  const DesignContext& context() const { return context_; }
  const DesignConstraints& constraints() const { return constraints_; }
  const Scheme& scheme() const { return scheme_; }

  bool fov_feasible() const { return fov_feasible_; }
  double l_max() const { return l_max_; }  // NaN when the FOV cannot be met
  double d_min() const { return constraints_.d_min; }
  double d_max() const { return d_max_; }
  double ax() const { return ax_; }
  double snr_required() const { return snr_required_; }
  double transit() const { return transit_; }
  CriticalSides sides() const;

  double spot_radius(double distance) const;
  // Clamped defocus map; `raw` receives the unclamped value when requested.
  double defocus(double x, double* raw = nullptr) const;
  Regime regime(double d, double distance) const;
  double snr(double d, double distance) const;
  double rate(double d, double distance) const;
  bool satisfies(double d, double distance) const;

  // Smallest L with snr(d, L) >= gamma_req; nullopt when none in [0, L_max].
  std::optional<double> min_distance(double d) const;

 private:
  DesignContext context_;
  DesignConstraints constraints_;
  Scheme scheme_;
  bool fov_feasible_ = false;
  double l_max_ = 0.0;
  double d_max_ = 0.0;
  double ax_ = 0.0;
  double snr_required_ = 0.0;
  double gap_ = 0.0;
  double transit_ = 0.0;
};

CriticalSides critical_sides(const DesignProblem& problem);

DesignSolution solve_ook(const DesignProblem& problem);
DesignSolution solve_ofdm(const DesignProblem& problem);
DesignSolution solve(const DesignProblem& problem);

// Which Table-3 row applies to d_* on [lo, d_max]; exactly one of 1, 2, 3.
int first_problem_row(double d_star, double lo, double d_max);

struct LinkBudget {
  double transmit_power = 10e-3;
  double beam_radius_rx = 0.1;
  // Collected power per lens at the reference lens count; scaled by lens area for other counts.
  std::optional<double> lens_power_override;
  int reference_outer_count = 0;  // 0: largest enumerated count
};

// Fixed hardware plus the (N_PD, N_a) sets to enumerate.
struct DesignSpace {
  PinPhotodetector pd;
  TiaConfig tia;
  LensSpec lens;
  BeamSpotModel spot;
  FovModel fov = TangentFov{};
  double array_side = 400e-6;
  double receiver_side = 2e-2;
  LinkBudget link;
  OuterGain gain = OuterGain::Sqrt;
  std::vector<int> pd_counts{1, 4, 9, 16, 25, 36, 49, 64, 81, 100};
  std::vector<int> outer_counts{64};

  void validate() const;
  double lens_power(int outer_count) const;
  DesignContext context(int pd_count, int outer_count) const;
};

struct GlobalSolution {
  DesignSolution best;
  std::vector<DesignSolution> configurations;  // pd-count major
};

// True when a should be preferred over b.
bool better_solution(const DesignSolution& a, const DesignSolution& b);

GlobalSolution solve_global(const DesignSpace& space, const DesignConstraints& constraints,
                            const Scheme& scheme);

struct FeasibleCell {
  Regime regime = Regime::SmallSpot;
  double snr = 0.0;
  double rate = 0.0;
  bool satisfies_all = false;
};

struct FeasibleRegion {
  std::vector<double> d;
  std::vector<double> distance;
  std::vector<FeasibleCell> cells;  // index = i_d * distance.size() + i_L

  const FeasibleCell& at(std::size_t i_d, std::size_t i_l) const {
    return cells[i_d * distance.size() + i_l];
  }
};

FeasibleRegion feasible_region(const DesignProblem& problem, std::vector<double> d_grid,
                               std::vector<double> distance_grid);

}  // namespace imgrx
