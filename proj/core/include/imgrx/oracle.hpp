#pragma once

#include <cstdint>
#include <vector>

#include "imgrx/optimizer.hpp"

namespace imgrx {

struct GridSpec {
  int d_steps = 400;
  int distance_steps = 400;

  void validate() const;  // at least 50 nodes per axis
};

struct McSpec {
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;

  void validate() const;  // at least 1e4 samples
};

// Constraints: full predicate set. AlwaysTrue: every node admissible (pure objective).
enum class PredicateMode { Constraints, AlwaysTrue };

struct GridResult {
  bool found = false;
  double d = 0.0;
  double distance = 0.0;
  double rate = 0.0;
  double d_step = 0.0;
  double distance_step = 0.0;
  std::vector<double> d_nodes;
  std::vector<double> distance_nodes;
  std::vector<std::uint8_t> feasible;  // index = i_d * distance_nodes.size() + i_L
};

// Exhaustive search over [d_min, d_max] x [0, min(f_b, L_max)], endpoints included.
GridResult grid_search(const DesignProblem& problem, const GridSpec& grid,
                       PredicateMode mode = PredicateMode::Constraints);

// Counter-based uniform stream: value depends only on (seed, index).
double counter_uniform(std::uint64_t seed, std::uint64_t index);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
};

// E[sum A_i^2] for a beam centre uniform on the array square [-D/2, D/2]^2.
McEstimate mc_sum_ai_squared(const InnerArray& array, double spot_radius, const McSpec& mc);

// Mean exact receiver SNR over the same placements, at design point (d, L).
McEstimate mc_average_snr(const DesignContext& context, double d, double distance,
                          Combiner combiner, const McSpec& mc);

}  // namespace imgrx
