#include "imgrx/snr.hpp"

#include <cmath>
#include <numeric>

#include "imgrx/constants.hpp"
#include "imgrx/errors.hpp"

namespace imgrx {

namespace {

void check_variance(double v) {
  if (!(std::isfinite(v) && v > 0.0)) throw DomainError("noise variance must be > 0");
}

void check_design(const SnrContext& ctx, double d, double w2) {
  if (!(std::isfinite(w2) && w2 > 0.0)) throw DomainError("beam radius must be > 0");
  if (!(std::isfinite(d) && d > 0.0)) throw DomainError("PD side must be > 0");
  ctx.inner(d).validate();
}

}  // namespace

const char* to_string(Combiner c) { return c == Combiner::Mrc ? "mrc" : "egc"; }
const char* to_string(OuterGain g) { return g == OuterGain::Sqrt ? "sqrt" : "linear"; }

void SnrContext::validate() const {
  pd.validate_material();
  tia.validate();
  outer.validate();
  if (!is_perfect_square(pd_count)) throw GeometryError("PD count must be a perfect square");
  if (!(std::isfinite(array_side) && array_side > 0.0)) throw GeometryError("array side must be > 0");
  if (!(std::isfinite(efficiency) && efficiency > 0.0 && efficiency <= 1.0))
    throw DomainError("optical efficiency must be in (0, 1]");
  if (!(std::isfinite(lens_power) && lens_power > 0.0))
    throw DomainError("collected power must be > 0");
}

double SnrContext::outer_factor() const {
  const double n = outer.count;
  return gain == OuterGain::Sqrt ? std::sqrt(n) : n;
}

double SnrContext::noise_variance(double pd_side) const {
  return ThermalNoise(tia).variance(bandwidth_optimal(pd, pd_side));
}

double mrc_snr_exact(std::span<const double> powers, double responsivity, double noise_variance) {
  check_variance(noise_variance);
  const double sq = std::transform_reduce(powers.begin(), powers.end(), 0.0, std::plus<>(),
                                          [](double p) { return p * p; });
  return responsivity * responsivity * sq / noise_variance;
}

double egc_snr_exact(std::span<const double> powers, double responsivity, double noise_variance) {
  check_variance(noise_variance);
  if (powers.empty()) throw DomainError("EGC needs at least one branch");
  const double s = responsivity * std::reduce(powers.begin(), powers.end(), 0.0);
  return s * s / (static_cast<double>(powers.size()) * noise_variance);
}

double avg_mrc_branch(const SnrContext& ctx, double d, double w2, Regime branch) {
  check_design(ctx, d, w2);
  const double ff = fill_factor(ctx.pd_count, d, ctx.array_side);
  const double base = ctx.outer_factor() * std::pow(ctx.signal_current(), 2) / ctx.noise_variance(d);
  const double spot = constants::pi * w2 * w2;
  switch (branch) {
    case Regime::SmallSpot:
      return base * ff;
    case Regime::Intermediate:
      return base * ff * d * d / spot;
    case Regime::LargeSpot:
      return base * ctx.pd_count * std::pow(d * d / spot, 2);
  }
  return 0.0;
}

double avg_mrc_snr(const SnrContext& ctx, double d, double w2) {
  check_design(ctx, d, w2);
  return avg_mrc_branch(ctx, d, w2, regime_of(d, ctx.array_side, w2));
}

double avg_egc_snr(const SnrContext& ctx, double d, double w2) {
  check_design(ctx, d, w2);
  const double ff = fill_factor(ctx.pd_count, d, ctx.array_side);
  const double n = ctx.pd_count;
  const double i = ctx.signal_current();
  const double base = ctx.outer_factor() / ctx.noise_variance(d);
  const double spot = constants::pi * w2 * w2;
  switch (regime_of(d, ctx.array_side, w2)) {
    case Regime::SmallSpot:
      return base * i * i * ff / n;
    case Regime::Intermediate:
      return base * std::pow(i * ff, 2) / n;
    case Regime::LargeSpot:
      return base * n * std::pow(i * d * d / spot, 2);
  }
  return 0.0;
}

double avg_snr(const SnrContext& ctx, double d, double w2, Combiner combiner) {
  return combiner == Combiner::Mrc ? avg_mrc_snr(ctx, d, w2) : avg_egc_snr(ctx, d, w2);
}

double ax_constant(const SnrContext& ctx) {
  ctx.validate();
  const ThermalNoise noise(ctx.tia);
  const double ct = transit_constant(ctx.pd);
  return noise.density() * ctx.array_side * ctx.array_side /
         (ctx.pd_count * ctx.outer_factor() * ct * std::pow(ctx.signal_current(), 2));
}

double avg_mrc_snr_reduced(double ax, double array_side, double d, double w2) {
  if (!(ax > 0.0)) throw DomainError("A_x must be > 0");
  if (!(w2 > 0.0)) throw DomainError("beam radius must be > 0");
  const double spot = constants::pi * w2 * w2;
  const double d5 = std::pow(d, 5);
  switch (regime_of(d, array_side, w2)) {
    case Regime::SmallSpot:
      return d * d * d / ax;
    case Regime::Intermediate:
      return d5 / (spot * ax);
    case Regime::LargeSpot:
      return array_side * array_side * d5 / (spot * spot * ax);
  }
  return 0.0;
}

double mrc_egc_gain_db(int pd_count) {
  if (pd_count < 1) throw DomainError("PD count must be >= 1");
  return 10.0 * std::log10(static_cast<double>(pd_count));
}

double placement_snr(const SnrContext& ctx, double d, const BeamFootprint& footprint,
                     Combiner combiner) {
  check_design(ctx, d, footprint.radius);
  const auto powers =
      per_pd_power(ctx.inner(d), footprint, ctx.lens_power, ctx.efficiency);
  const double sigma2 = ctx.noise_variance(d);
  const double single = combiner == Combiner::Mrc
                            ? mrc_snr_exact(powers, ctx.pd.responsivity, sigma2)
                            : egc_snr_exact(powers, ctx.pd.responsivity, sigma2);
  return ctx.outer_factor() * single;
}

}  // namespace imgrx
