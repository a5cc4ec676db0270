#include <cmath>
#include <random>

#include <doctest.h>

#include "imgrx/constants.hpp"
#include "imgrx/errors.hpp"
#include "imgrx/oracle.hpp"
#include "imgrx/validation.hpp"

using namespace imgrx;
using doctest::Approx;

namespace {

DesignProblem reference_problem(int n_pd, const Scheme& scheme) {
  return DesignProblem(calibrated_design_space(OuterGain::Linear).context(n_pd, 64),
                       DesignConstraints{}, scheme);
}

double approximation(const InnerArray& a, double w) {
  return constants::pi * w * w * fill_factor(a) * a.pd_side * a.pd_side;
}

}  // namespace

TEST_CASE("counter-based uniforms depend only on seed and index") {
  CHECK(counter_uniform(1, 0) == counter_uniform(1, 0));
  CHECK(counter_uniform(1, 0) != counter_uniform(2, 0));
  CHECK(counter_uniform(1, 0) != counter_uniform(1, 1));
  double mean = 0.0;
  for (std::uint64_t i = 0; i < 100000; ++i) {
    const double u = counter_uniform(42, i);
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    mean += u;
  }
  CHECK(mean / 100000 == Approx(0.5).epsilon(0.01));
}

TEST_CASE("Monte-Carlo estimates are bit-identical for a fixed seed") {
  const InnerArray a{64, 400e-6, 40e-6};
  const auto x = mc_sum_ai_squared(a, 100e-6, {20000, 5});
  const auto y = mc_sum_ai_squared(a, 100e-6, {20000, 5});
  CHECK(x.mean == y.mean);
  CHECK(x.std_error == y.std_error);
  CHECK(x.samples == 20000);
  CHECK(mc_sum_ai_squared(a, 100e-6, {20000, 6}).mean != x.mean);
}

TEST_CASE("overlap approximation in its asymptotic domain") {
  // d << W2 << D: the approximation holds to within about 5%.
  const double D = 4000e-6;
  const double w = 0.02 * D;
  const int m = 339;  // d close to sqrt(pi) W2 / 15
  const InnerArray a{m * m, D, 0.8 * D / m};
  const auto est = mc_sum_ai_squared(a, w, {100000, 1});
  CHECK(est.mean / approximation(a, w) == Approx(0.95).epsilon(0.03));
}

TEST_CASE("overlap approximation on the small reference array") {
  // Edge losses dominate when W2 is a quarter of D; the estimate sits near 0.71.
  const InnerArray a{64, 400e-6, 40e-6};
  const auto est = mc_sum_ai_squared(a, 100e-6, {100000, 1});
  CHECK(est.mean / approximation(a, 100e-6) == Approx(0.708).epsilon(0.005 / 0.708));
  CHECK(est.std_error / est.mean < 0.01);
}

TEST_CASE("full illumination and vanishing PDs") {
  const InnerArray a{16, 400e-6, 50e-6};
  const auto est = mc_sum_ai_squared(a, 5e-3, {10000, 1});
  CHECK(est.mean == Approx(16 * std::pow(50e-6, 4)).epsilon(1e-12));
  CHECK(est.std_error == Approx(0.0).scale(1e-30));

  const InnerArray tiny{16, 400e-6, 1e-9};
  CHECK(mc_sum_ai_squared(tiny, 100e-6, {10000, 1}).mean < 1e-30);
}

TEST_CASE("Monte-Carlo SNR against the analytic branches") {
  const auto p = reference_problem(49, Ook{});
  const auto& ctx = p.context();
  const double d = 44.81e-6;

  // Every placement lights all PDs identically.
  const double l_large = 0.0;
  const auto large = mc_average_snr(ctx, d, l_large, Combiner::Mrc, {10000, 3});
  CHECK(large.mean == Approx(avg_mrc_snr(ctx.snr, d, p.spot_radius(l_large))).epsilon(0.01));

  // Small spot: the combiner gap is 10 log10 N_PD.
  const double l_small = 820e-6;
  const auto mrc = mc_average_snr(ctx, d, l_small, Combiner::Mrc, {20000, 3});
  const auto egc = mc_average_snr(ctx, d, l_small, Combiner::Egc, {20000, 3});
  CHECK(10 * std::log10(mrc.mean / egc.mean) == Approx(10 * std::log10(49.0)).epsilon(1.0 / 16.9));

  // Intermediate spot on the 400 um array: edge losses pull the estimate well below the
  // analytic branch (about 0.65 of it here).
  const double l_mid = 600e-6;
  REQUIRE(p.regime(d, l_mid) == Regime::Intermediate);
  const auto mid = mc_average_snr(ctx, d, l_mid, Combiner::Mrc, {20000, 3});
  const double ratio = mid.mean / avg_mrc_snr(ctx.snr, d, p.spot_radius(l_mid));
  CHECK(ratio == Approx(0.6455).epsilon(0.005 / 0.6455));
}

TEST_CASE("grid search on the reference OOK design") {
  const auto p = reference_problem(49, Ook{});
  const auto g = grid_search(p, {});
  REQUIRE(g.found);
  const auto s = solve(p);
  CHECK(std::abs(g.d - s.pd_side) <= g.d_step);
  CHECK(g.distance >= s.distance_lo - g.distance_step);
  CHECK(g.rate == Approx(23.82e9).epsilon(5e-3));
  CHECK(s.rate >= g.rate);
  CHECK(g.d_nodes.size() == 400);
  CHECK(g.feasible.size() == 400 * 400);
}

TEST_CASE("grid refinement never lowers the best rate") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    const auto p = random_problem(rng, default_design_space(), k % 2 ? Scheme{DcoOfdm{}} : Ook{});
    const auto coarse = grid_search(p, {60, 60});
    const auto fine = grid_search(p, {119, 119});  // contains every coarse node
    CHECK(fine.found >= coarse.found);
    if (coarse.found) CHECK(fine.rate >= coarse.rate * (1 - 1e-12));
  }
}

TEST_CASE("unconstrained grid search recovers the small-spot extremum") {
  auto space = calibrated_design_space(OuterGain::Linear);
  auto ctx = space.context(36, 64);
  ctx.snr.lens_power *= 10.0;
  DesignConstraints c;
  c.d_min = 2e-6;
  const DesignProblem p(ctx, c, DcoOfdm{});
  const double d_star = p.sides().d_star();
  REQUIRE(d_star > p.d_min());
  REQUIRE(d_star < p.d_max());

  const auto g = grid_search(p, {400, 400}, PredicateMode::AlwaysTrue);
  REQUIRE(g.found);
  CHECK(std::abs(g.d - d_star) <= g.d_step);
  CHECK(g.rate >= grid_search(p, {400, 400}).rate);
}

TEST_CASE("oracle input validation") {
  CHECK_THROWS_AS((GridSpec{10, 400}.validate()), DomainError);
  CHECK_THROWS_AS((McSpec{1000, 1}.validate()), DomainError);
  const auto p = reference_problem(49, Ook{});
  CHECK_THROWS_AS(grid_search(p, {10, 10}), DomainError);
}
