#include "imgrx/modulation.hpp"

#include <cmath>

#include "imgrx/constants.hpp"
#include "imgrx/errors.hpp"

namespace imgrx {

namespace {

void check_ber(double ber) {
  if (!(ber > 0.0 && ber < 0.5)) throw DomainError("BER target must be in (0, 0.5)");
}

// Acklam's rational approximation for the lower tail, used as the Newton seed.
double normal_quantile_seed(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) return -normal_quantile_seed(1.0 - p);
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

void DcoOfdm::validate() const {
  if (subcarriers < 4 || subcarriers % 2 != 0)
    throw DomainError("DCO-OFDM needs an even subcarrier count >= 4");
}

std::string to_string(const Scheme& scheme) {
  if (std::holds_alternative<Ook>(scheme)) return "ook";
  return "dco-ofdm";
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double q_inverse(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("tail probability must be in (0, 1)");
  if (p == 0.5) return 0.0;
  // Q^-1(p) is the lower-tail quantile of 1 - p; work with the smaller tail for accuracy.
  const bool upper = p < 0.5;
  const double tail = upper ? p : 1.0 - p;
  double x = -normal_quantile_seed(tail);
  for (int i = 0; i < 8; ++i) {
    const double err = q_function(x) - tail;
    const double density = std::exp(-0.5 * x * x) / std::sqrt(2.0 * constants::pi);
    const double step = err / density;
    x += step;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x))) break;
  }
  return upper ? x : -x;
}

double snr_gap(double ber) {
  check_ber(ber);
  if (ber >= 0.2) throw DomainError("SNR gap needs BER < 0.2");
  return -std::log(5.0 * ber) / 1.5;
}

double snr_required(const Scheme& scheme, double ber) {
  check_ber(ber);
  if (std::holds_alternative<Ook>(scheme)) {
    const double q = q_inverse(ber);
    return q * q;
  }
  std::get<DcoOfdm>(scheme).validate();
  constexpr double min_constellation = 4.0;
  return snr_gap(ber) * (min_constellation - 1.0);
}

double spectral_factor(const DcoOfdm& scheme) {
  scheme.validate();
  return static_cast<double>(scheme.subcarriers - 2) / scheme.subcarriers;
}

double rate_ook(double bandwidth) {
  if (!(std::isfinite(bandwidth) && bandwidth >= 0.0)) throw DomainError("bandwidth must be >= 0");
  return 2.0 * bandwidth;
}

double rate_ofdm(double bandwidth, double snr, const DcoOfdm& scheme, double ber) {
  if (!(std::isfinite(bandwidth) && bandwidth >= 0.0)) throw DomainError("bandwidth must be >= 0");
  if (!(snr >= 0.0)) throw DomainError("SNR must be >= 0");
  return spectral_factor(scheme) * bandwidth * std::log2(1.0 + snr / snr_gap(ber));
}

double extremum_constant(int k) {
  if (k != 3 && k != 5) throw DomainError("extremum constant defined for k = 3 or 5");
  // In t = ln(1 + x): f(t) = k (1 - e^-t) - t, positive just above 0 and negative for t > k.
  const auto f = [k](double t) { return k * -std::expm1(-t) - t; };
  double lo = 1e-6;
  double hi = static_cast<double>(k);
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return std::expm1(0.5 * (lo + hi));
}

}  // namespace imgrx
