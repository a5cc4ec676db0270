#include "imgrx/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "imgrx/config.hpp"
#include "imgrx/constants.hpp"
#include "imgrx/errors.hpp"
#include "imgrx/oracle.hpp"

namespace imgrx {

namespace {

constexpr double um = 1e-6;

std::string num(double v, int precision = 6) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

bool near_rel(double actual, double target, double rel) {
  return std::abs(actual / target - 1.0) <= rel;
}

bool near_abs(double actual, double target, double tol) { return std::abs(actual - target) <= tol; }

int random_square(std::mt19937_64& rng, int max_root) {
  const int k = std::uniform_int_distribution<int>(1, max_root)(rng);
  return k * k;
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

CheckResult bandwidth_calibration(const DesignSpace& s) {
  const double b1 = bandwidth_optimal(s.pd, 44.81 * um);
  const double b2 = bandwidth_optimal(s.pd, 53.33 * um);
  const bool ok = near_rel(b1, 11.91e9, 0.005) && near_rel(b2, 10.00e9, 0.005);
  return {1, "bandwidth calibration", ok,
          "B(44.81 um) = " + num(b1 / 1e9) + " GHz (11.91 +-0.5%), B(53.33 um) = " +
              num(b2 / 1e9) + " GHz (10.00 +-0.5%)"};
}

CheckResult ook_headline(const DesignSpace& s) {
  const double r = rate_ook(bandwidth_optimal(s.pd, 44.81 * um));
  return {2, "OOK headline rate", near_rel(r, 23.82e9, 0.005),
          "R = " + num(r / 1e9) + " Gbps (23.82 +-0.5%)"};
}

CheckResult defocus_ranges(const DesignSpace& s) {
  const double l1 = defocus_for_spot(s.spot, 44.81 * um).distance;
  const double l2 = defocus_for_spot(s.spot, 53.33 * um).distance;
  const bool ok = near_abs(l1, 785 * um, 1 * um) && near_abs(l2, 778 * um, 1 * um);
  return {3, "defocus range", ok,
          "L(44.81 um) = " + num(l1 / um) + " um (785 +-1), L(53.33 um) = " + num(l2 / um) +
              " um (778 +-1)"};
}

CheckResult beam_spot_slope(const DesignSpace& s) {
  const auto m = beam_spot_coefficients(s.lens, 0.5);
  return {4, "beam-spot coefficient", near_abs(m.b1, 0.69, 0.01),
          "b1 = " + num(m.b1) + " (0.69 +-0.01), b0 = " + num(m.b0 / um) + " um"};
}

CheckResult thresholds() {
  const double g_ook = snr_required(Ook{}, 1e-3);
  const double gap = snr_gap(1e-3);
  const bool ok =
      near_abs(g_ook, 9.549, 0.01) && near_abs(gap, 3.532, 0.005) && near_abs(3 * gap, 10.60, 0.05);
  return {5, "threshold constants", ok,
          "gamma_req(OOK) = " + num(g_ook) + " (9.549 +-0.01), Gamma = " + num(gap) +
              " (3.532 +-0.005), 3 Gamma = " + num(3 * gap) + " (10.60 +-0.05)"};
}

CheckResult extremum_constants() {
  const double a = extremum_constant(3);
  const double b = extremum_constant(5);
  return {6, "extremum constants", near_abs(a, 15.80, 0.02) && near_abs(b, 142.32, 0.10),
          "x3 = " + num(a, 10) + " (15.80 +-0.02), x5 = " + num(b, 10) + " (142.32 +-0.10)"};
}

CheckResult ofdm_headline() {
  const double r = rate_ofdm(10e9, 11.85, DcoOfdm{512}, 1e-3);
  return {7, "DCO-OFDM rate identity", near_rel(r, 21.14e9, 0.005),
          "R = " + num(r / 1e9) + " Gbps (21.14 +-0.5%)"};
}

CheckResult geometry_limits(const DesignSpace& s) {
  const double a = max_pd_side(49, s.array_side, 0.64);
  const double b = max_pd_side(36, s.array_side, 0.64);
  const bool ok = near_abs(a, 45.71 * um, 0.005 * um) && near_abs(b, 53.33 * um, 0.005 * um);
  return {8, "geometry limits", ok,
          "d_max(49) = " + num(a / um) + " um (45.71), d_max(36) = " + num(b / um) +
              " um (53.33)"};
}

CheckResult tangent_fov(const DesignSpace& s) {
  const FovModel m = TangentFov{s.array_side, s.lens.effective_focal, s.lens.back_focal};
  const double f820 = fov_from_distance(m, 820 * um);
  const double f785 = fov_from_distance(m, 785 * um);
  const double lmax = max_distance_for_fov(m, 15.0);
  const double raw = s.array_side / (2.0 * std::tan(7.5 * constants::pi / 180.0)) -
                     (s.lens.effective_focal - s.lens.back_focal);
  const bool clamped = raw > s.lens.back_focal && lmax == s.lens.back_focal;
  const bool ok = near_abs(f820, 15.7, 0.1) && near_abs(lmax, 820 * um, 1e-9 * um) && clamped &&
                  near_abs(f785, 16.1, 0.2);
  return {9, "tangent FOV model", ok,
          "FOV(820 um) = " + num(f820) + " deg (15.7 +-0.1), L_max(15 deg) = " + num(lmax / um) +
              " um (820, clamped from " + num(raw / um) + "), FOV(785 um) = " + num(f785) +
              " deg (16.1 +-0.2)"};
}

CheckResult combiner_properties(const AcceptanceOptions& o) {
  std::mt19937_64 rng(o.seed + 10);
  const double D = o.space.array_side;
  int failures = 0;
  int equal_cases = 0;
  double worst = 0.0;
  for (int k = 0; k < o.random_placements; ++k) {
    const int n = random_square(rng, 10);
    const double d = D / std::sqrt(static_cast<double>(n)) * uniform(rng, 0.2, 1.0);
    const bool cover_all = k % 10 == 0;
    const double w = cover_all ? D * uniform(rng, 1.5, 3.0) : log_uniform(rng, 0.2 * d, 2.0 * D);
    const double span = cover_all ? 0.0 : 0.5 * D + w;
    const BeamFootprint f{{uniform(rng, -span, span + 1e-30), uniform(rng, -span, span + 1e-30)}, w};
    const auto p = per_pd_power({n, D, d}, f, 3e-6, 0.18);
    const double r = 0.5;
    const double sigma2 = 1e-12;
    const double mrc = mrc_snr_exact(p, r, sigma2);
    const double egc = egc_snr_exact(p, r, sigma2);
    // N sum p^2 - (sum p)^2 = sum_{i<j} (p_i - p_j)^2 >= 0, zero iff all equal.
    double pairs = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = i + 1; j < p.size(); ++j) pairs += (p[i] - p[j]) * (p[i] - p[j]);
    const double identity = r * r * pairs / (n * sigma2);
    const double scale = std::max(mrc, 1e-300);
    const double err = std::abs((mrc - egc) - identity) / scale;
    worst = std::max(worst, err);
    const bool all_equal = std::all_of(p.begin(), p.end(), [&](double x) {
      return std::abs(x - p.front()) <= 1e-12 * std::max(std::abs(p.front()), 1e-300);
    });
    if (all_equal) ++equal_cases;
    const bool equality = mrc - egc <= 1e-12 * scale;
    if (err > 1e-9 || mrc < egc * (1.0 - 1e-12) || (all_equal && !equality)) ++failures;
  }

  int gain_failures = 0;
  for (int n = 1; n <= 100; ++n) {
    if (!is_perfect_square(n)) continue;
    SnrContext ctx;
    ctx.array_side = D;
    ctx.pd_count = n;
    ctx.outer = {64, 2e-2};
    ctx.efficiency = 0.18;
    ctx.lens_power = 3e-6;
    ctx.pd = o.space.pd;
    ctx.tia = o.space.tia;
    const double d = max_pd_side(n, D, 0.64);
    const double w = 0.5 * d / constants::sqrt_pi;
    const double ratio_db = 10.0 * std::log10(avg_mrc_snr(ctx, d, w) / avg_egc_snr(ctx, d, w));
    if (std::abs(ratio_db - mrc_egc_gain_db(n)) > 1e-9) ++gain_failures;
  }
  return {10, "combiner properties", failures == 0 && gain_failures == 0,
          std::to_string(o.random_placements) + " placements, " + std::to_string(failures) +
              " violations (" + std::to_string(equal_cases) +
              " equal-power cases, worst identity error " + num(worst, 3) +
              "); small-spot gain mismatches: " + std::to_string(gain_failures)};
}

CheckResult continuity(const AcceptanceOptions& o) {
  std::mt19937_64 rng(o.seed + 11);
  double worst = 0.0;
  for (int k = 0; k < o.random_contexts; ++k) {
    SnrContext ctx;
    ctx.pd = o.space.pd;
    ctx.tia = o.space.tia;
    ctx.array_side = uniform(rng, 100, 2000) * um;
    ctx.pd_count = random_square(rng, 12);
    ctx.outer = {random_square(rng, 8), 2e-2};
    ctx.efficiency = uniform(rng, 0.05, 0.9);
    ctx.lens_power = log_uniform(rng, 1e-7, 1e-3);
    ctx.gain = k % 2 ? OuterGain::Linear : OuterGain::Sqrt;
    const double d = max_pd_side(ctx.pd_count, ctx.array_side, uniform(rng, 0.05, 1.0));
    const double w_small = d / constants::sqrt_pi;
    const double w_large = ctx.array_side / constants::sqrt_pi;
    const auto rel = [](double a, double b) { return std::abs(a - b) / std::max(a, b); };
    worst = std::max(worst, rel(avg_mrc_branch(ctx, d, w_small, Regime::SmallSpot),
                                avg_mrc_branch(ctx, d, w_small, Regime::Intermediate)));
    worst = std::max(worst, rel(avg_mrc_branch(ctx, d, w_large, Regime::Intermediate),
                                avg_mrc_branch(ctx, d, w_large, Regime::LargeSpot)));
  }
  return {11, "piecewise continuity", worst <= 1e-12,
          std::to_string(o.random_contexts) + " contexts, worst relative jump " + num(worst, 3) +
              " (<= 1e-12)"};
}

CheckResult overlap_approximation(const AcceptanceOptions& o) {
  // Configurations inside the approximation's domain: d << W2 << D, FF = 0.64.
  struct Case {
    double w_over_d_array;
    double w_over_pd;
  };
  static constexpr Case cases[] = {{0.015, 15}, {0.015, 20}, {0.02, 15}, {0.02, 18}, {0.02, 20},
                                   {0.025, 15}, {0.025, 18}, {0.025, 20}, {0.03, 15}, {0.03, 18}};
  const double D = 4000 * um;
  int failures = 0;
  std::string worst;
  double worst_dev = -1.0;
  std::uint64_t seed = o.seed + 12;
  for (const auto& c : cases) {
    const double w = c.w_over_d_array * D;
    const double d_guess = w * constants::sqrt_pi / c.w_over_pd;
    const int m = static_cast<int>(std::lround(0.8 * D / d_guess));
    const InnerArray array{m * m, D, 0.8 * D / m};
    if (regime_of(array.pd_side, D, w) != Regime::Intermediate) ++failures;
    const auto est = mc_sum_ai_squared(array, w, {o.mc_samples, seed++});
    const double approx =
        constants::pi * w * w * fill_factor(array) * array.pd_side * array.pd_side;
    const double dev = std::abs(est.mean / approx - 1.0);
    const double allowed = 0.10 + 3.0 * est.std_error / approx;
    if (dev > allowed) ++failures;
    if (dev > worst_dev) {
      worst_dev = dev;
      worst = "N_PD = " + std::to_string(array.pd_count) + ", W2 = " + num(w / um) +
              " um: ratio " + num(est.mean / approx, 4) + " +- " + num(est.std_error / approx, 2);
    }
  }
  return {12, "overlap approximation", failures == 0,
          std::to_string(std::size(cases)) + " configurations x " +
              std::to_string(o.mc_samples) + " samples, worst " + worst +
              " (allowed 10% + 3 sigma)"};
}

CheckResult oracle_equivalence(const AcceptanceOptions& o) {
  std::mt19937_64 rng(o.seed + 13);
  int verdict_mismatch = 0;
  int rate_shortfall = 0;
  int feasible = 0;
  int total = 0;
  double worst_margin = 1.0;
  for (const Scheme scheme : {Scheme{Ook{}}, Scheme{DcoOfdm{512}}}) {
    for (int k = 0; k < o.random_configs; ++k) {
      const DesignProblem p = random_problem(rng, o.space, scheme);
      const auto closed = solve(p);
      const auto grid = grid_search(p, {o.grid_steps, o.grid_steps});
      ++total;
      if (closed.feasible != grid.found) {
        ++verdict_mismatch;
        continue;
      }
      if (!grid.found) continue;
      ++feasible;
      const double delta = grid.d_step / p.d_min();
      const double margin = closed.rate / grid.rate;
      worst_margin = std::min(worst_margin, margin);
      if (closed.rate < grid.rate * (1.0 - 2.0 * delta)) ++rate_shortfall;
    }
  }
  return {13, "oracle equivalence", verdict_mismatch == 0 && rate_shortfall == 0,
          std::to_string(total) + " configurations (" + std::to_string(feasible) +
              " feasible), verdict mismatches " + std::to_string(verdict_mismatch) +
              ", rate shortfalls " + std::to_string(rate_shortfall) +
              ", min closed/grid rate " + num(worst_margin, 8)};
}

CheckResult tradeoff_monotonicity(const AcceptanceOptions& o) {
  const DesignSpace& space = o.sweep_space;
  DesignConstraints constraints;
  int violations = 0;
  std::string summary;
  for (const Scheme scheme : {Scheme{Ook{}}, Scheme{DcoOfdm{512}}}) {
    double previous = std::numeric_limits<double>::infinity();
    double first = 0.0;
    double last = 0.0;
    int points = 0;
    for (double fov = o.fov_min_deg; fov <= o.fov_max_deg + 1e-9; fov += 1.0) {
      constraints.fov_req_deg = fov;
      const double rate = solve_global(space, constraints, scheme).best.rate;
      if (rate > previous * (1.0 + 1e-9)) ++violations;
      previous = rate;
      if (points++ == 0) first = rate;
      last = rate;
    }
    summary += to_string(scheme) + " " + num(first / 1e9, 4) + " -> " + num(last / 1e9, 4) +
               " Gbps; ";
  }
  return {14, "rate-FOV trade-off monotonicity", violations == 0,
          summary + std::to_string(violations) + " increases over " + num(o.fov_min_deg) + "-" +
              num(o.fov_max_deg) + " deg"};
}

}  // namespace

DesignSpace default_design_space() { return to_design_space(DesignConfig{}); }

double calibrated_lens_power(OuterGain gain) {
  return gain == OuterGain::Linear ? 6.106401073753025e-6 : 1.7271510431582314e-5;
}

DesignSpace calibrated_design_space(OuterGain gain) {
  DesignSpace s = default_design_space();
  s.gain = gain;
  s.link.lens_power_override = calibrated_lens_power(gain);
  s.link.reference_outer_count = 64;
  s.outer_counts = {1, 4, 9, 16, 25, 36, 49, 64};
  return s;
}

CalibrationDiagnostic calibration_diagnostic(const DesignSpace& space,
                                             const DesignConstraints& constraints) {
  const DesignProblem p(space.context(49, 64), constraints, Ook{});
  const double d = p.sides().d_delta();
  return {d, d / (44.81 * um)};
}

DesignProblem random_problem(std::mt19937_64& rng, const DesignSpace& base, const Scheme& scheme) {
  DesignSpace space = base;
  space.array_side = uniform(rng, 250, 600) * um;
  space.fov = TangentFov{space.array_side, space.lens.effective_focal, space.lens.back_focal};
  space.gain = uniform(rng, 0, 1) < 0.5 ? OuterGain::Sqrt : OuterGain::Linear;
  space.link.lens_power_override.reset();
  DesignContext ctx = space.context(random_square(rng, 10), random_square(rng, 8));
  ctx.snr.lens_power = log_uniform(rng, 1e-6, 1e-2);

  DesignConstraints c;
  c.fov_req_deg = uniform(rng, 8, 40);
  c.ber = log_uniform(rng, 1e-6, 1e-2);
  c.d_min = uniform(rng, 2, 30) * um;
  c.ff_target = uniform(rng, 0.3, 0.95);
  return DesignProblem(ctx, c, scheme);
}

std::vector<CheckResult> run_acceptance(const AcceptanceOptions& o) {
  std::vector<CheckResult> out;
  const auto guarded = [&](int id, const char* name, auto&& check) {
    try {
      out.push_back(check());
    } catch (const std::exception& e) {
      out.push_back({id, name, false, std::string("exception: ") + e.what()});
    }
  };
  guarded(1, "bandwidth calibration", [&] { return bandwidth_calibration(o.space); });
  guarded(2, "OOK headline rate", [&] { return ook_headline(o.space); });
  guarded(3, "defocus range", [&] { return defocus_ranges(o.space); });
  guarded(4, "beam-spot coefficient", [&] { return beam_spot_slope(o.space); });
  guarded(5, "threshold constants", [] { return thresholds(); });
  guarded(6, "extremum constants", [] { return extremum_constants(); });
  guarded(7, "DCO-OFDM rate identity", [] { return ofdm_headline(); });
  guarded(8, "geometry limits", [&] { return geometry_limits(o.space); });
  guarded(9, "tangent FOV model", [&] { return tangent_fov(o.space); });
  guarded(10, "combiner properties", [&] { return combiner_properties(o); });
  guarded(11, "piecewise continuity", [&] { return continuity(o); });
  guarded(12, "overlap approximation", [&] { return overlap_approximation(o); });
  guarded(13, "oracle equivalence", [&] { return oracle_equivalence(o); });
  guarded(14, "rate-FOV trade-off monotonicity", [&] { return tradeoff_monotonicity(o); });
  return out;
}

}  // namespace imgrx
