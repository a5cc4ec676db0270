#include "imgrx/optics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "imgrx/constants.hpp"
#include "imgrx/errors.hpp"

namespace imgrx {

namespace {

constexpr double deg = constants::pi / 180.0;

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

double cubic_um(const CubicFov& m, double fov_deg) {
  const auto& c = m.coeffs;
  return ((c[0] * fov_deg + c[1]) * fov_deg + c[2]) * fov_deg + c[3];
}

double tangent_fov(const TangentFov& m, double distance) {
  return 2.0 * std::atan(m.aperture_side / (2.0 * (distance + m.effective_focal - m.back_focal))) /
         deg;
}

// The fit is strictly decreasing on its range; bisection is plenty.
double cubic_inverse(const CubicFov& m, double distance) {
  const double target = distance * 1e6;
  double lo = m.fov_min_deg;
  double hi = m.fov_max_deg;
  const double l_lo = cubic_um(m, lo);
  const double l_hi = cubic_um(m, hi);
  if (target > l_lo || target < l_hi)
    throw ModelRangeError("distance outside the range covered by the cubic FOV fit");
  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (cubic_um(m, mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void LensSpec::validate() const {
  require(positive(back_focal) && positive(effective_focal) && back_focal <= effective_focal,
          "lens requires 0 < f_b <= f_e");
  require(positive(clear_aperture) && std::isfinite(outer_diameter) &&
              clear_aperture <= outer_diameter,
          "lens requires 0 < CA <= outer diameter");
  require(positive(transmission) && transmission <= 1.0, "lens transmission must be in (0, 1]");
  require(positive(wavelength), "wavelength must be > 0");
}

void BeamSpotModel::validate() const {
  require(positive(b0), "beam spot intercept b0 must be > 0");
  require(positive(b1) && b1 < 1.0, "beam spot slope b1 must be in (0, 1)");
  require(positive(back_focal), "back focal length must be > 0");
  require(positive(eta) && eta < 1.0, "enclosed-power fraction must be in (0, 1)");
}

double BeamSpotModel::radius(double distance) const { return beam_spot_radius(*this, distance); }

double diffraction_limit(const LensSpec& lens) {
  lens.validate();
  return 1.22 * lens.wavelength * lens.effective_focal / lens.clear_aperture;
}

BeamSpotModel beam_spot_coefficients(const LensSpec& lens, double eta) {
  require(positive(eta) && eta < 1.0, "enclosed-power fraction must be in (0, 1)");
  const double r_dl = diffraction_limit(lens);
  if (lens.clear_aperture <= 2.0 * r_dl)
    throw DomainError("degenerate lens: clear aperture not above twice the diffraction limit");
  const double kappa = std::sqrt(eta);
  BeamSpotModel m;
  m.b0 = r_dl * kappa;
  m.b1 = kappa / (2.0 * lens.back_focal) * (lens.clear_aperture - 2.0 * r_dl);
  m.back_focal = lens.back_focal;
  m.eta = eta;
  return m;
}

double beam_spot_radius(const BeamSpotModel& model, double distance) {
  if (!(distance >= 0.0 && distance <= model.back_focal))
    throw DomainError("lens-to-array distance outside [0, f_b]");
  return model.b1 * (model.back_focal - distance) + model.b0;
}

Defocus defocus_for_spot(const BeamSpotModel& model, double x) {
  require(std::isfinite(x), "spot size must be finite");
  const double raw = model.back_focal - (x / constants::sqrt_pi - model.b0) / model.b1;
  if (raw > model.back_focal) return {model.back_focal, true};
  if (raw < 0.0) return {0.0, true};
  return {raw, false};
}

void validate(const FovModel& model) {
  if (const auto* t = std::get_if<TangentFov>(&model)) {
    require(positive(t->aperture_side), "FOV aperture side must be > 0");
    require(positive(t->back_focal) && positive(t->effective_focal) &&
                t->back_focal <= t->effective_focal,
            "FOV model requires 0 < f_b <= f_e");
  } else {
    const auto& c = std::get<CubicFov>(model);
    for (double a : c.coeffs) require(std::isfinite(a), "cubic FOV coefficients must be finite");
    require(positive(c.fov_min_deg) && c.fov_min_deg < c.fov_max_deg && c.fov_max_deg < 180.0,
            "cubic FOV fit range must satisfy 0 < min < max < 180");
    require(positive(c.back_focal), "back focal length must be > 0");
  }
}

double fov_from_distance(const FovModel& model, double distance) {
  validate(model);
  if (const auto* t = std::get_if<TangentFov>(&model)) {
    require(std::isfinite(distance) && distance >= 0.0, "distance must be >= 0");
    return tangent_fov(*t, distance);
  }
  return cubic_inverse(std::get<CubicFov>(model), distance);
}

double max_fov_deg(const FovModel& model) {
  validate(model);
  if (const auto* t = std::get_if<TangentFov>(&model)) return tangent_fov(*t, 0.0);
  const auto& c = std::get<CubicFov>(model);
  if (cubic_um(c, c.fov_max_deg) >= 0.0) return c.fov_max_deg;
  return cubic_inverse(c, 0.0);
}

double max_distance_for_fov(const FovModel& model, double fov_req_deg) {
  validate(model);
  require(positive(fov_req_deg), "required FOV must be > 0");
  const auto infeasible = [&] {
    return InfeasibleFovError("required FOV of " + std::to_string(fov_req_deg) +
                                  " deg exceeds the model maximum",
                              max_fov_deg(model));
  };
  if (const auto* t = std::get_if<TangentFov>(&model)) {
    if (fov_req_deg >= 180.0) throw infeasible();
    const double l = t->aperture_side / (2.0 * std::tan(0.5 * fov_req_deg * deg)) -
                     (t->effective_focal - t->back_focal);
    if (l < 0.0) throw infeasible();
    return std::min(l, t->back_focal);
  }
  const auto& c = std::get<CubicFov>(model);
  if (fov_req_deg < c.fov_min_deg || fov_req_deg > c.fov_max_deg)
    throw ModelRangeError("required FOV outside the fitted range of the cubic FOV model");
  const double l = cubic_um(c, fov_req_deg) * 1e-6;
  if (l < 0.0) throw infeasible();
  return std::min(l, c.back_focal);
}

double optical_efficiency(const LensSpec& lens, double lens_radius, double spot_fraction) {
  lens.validate();
  require(positive(spot_fraction) && spot_fraction <= 1.0, "spot fraction must be in (0, 1]");
  require(std::isfinite(lens_radius), "lens radius must be finite");
  if (lens_radius < 0.5 * lens.clear_aperture)
    throw GeometryError("lens pitch smaller than the clear aperture");
  const double aperture = lens.clear_aperture / (2.0 * lens_radius);
  return lens.transmission * spot_fraction * aperture * aperture;
}

double lens_received_power(double transmit_power, double beam_radius_rx, double lens_radius) {
  require(std::isfinite(transmit_power) && transmit_power >= 0.0, "transmit power must be >= 0");
  require(positive(beam_radius_rx) && positive(lens_radius), "radii must be > 0");
  if (beam_radius_rx < 10.0 * lens_radius)
    throw DomainError("uniform-intensity approximation needs W_rx >= 10 r_lns");
  return 2.0 * transmit_power * lens_radius * lens_radius / (beam_radius_rx * beam_radius_rx);
}

}  // namespace imgrx
