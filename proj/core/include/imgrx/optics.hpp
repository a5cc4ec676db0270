#pragma once

#include <array>
#include <variant>

namespace imgrx {

// Aspheric lens; defaults are the Thorlabs 354140-B datasheet at 850 nm.
struct LensSpec {
  double effective_focal = 1.45e-3;
  double back_focal = 0.82e-3;
  double clear_aperture = 1.6e-3;
  double outer_diameter = 2.4e-3;
  double transmission = 0.88;  // xi_r
  double wavelength = 850e-9;

  void validate() const;
};

// W2(L) = b1 (f_b - L) + b0, the radius enclosing a fraction eta of the power.
struct BeamSpotModel {
  double b0 = 1e-6;
  double b1 = 0.69;
  double back_focal = 0.82e-3;
  double eta = 0.5;

  void validate() const;
  double radius(double distance) const;
};

double diffraction_limit(const LensSpec& lens);

// Analytic coefficients from the lens datasheet, kappa = sqrt(eta).
BeamSpotModel beam_spot_coefficients(const LensSpec& lens, double eta);

double beam_spot_radius(const BeamSpotModel& model, double distance);

struct Defocus {
  double distance = 0.0;
  bool clamped = false;
};

// Distance L at which sqrt(pi) W2(L) equals x, clamped to [0, f_b].
Defocus defocus_for_spot(const BeamSpotModel& model, double x);

struct TangentFov {
  double aperture_side = 400e-6;  // inner-array side D
  double effective_focal = 1.45e-3;
  double back_focal = 0.82e-3;
};

// L[um] = a3 F^3 + a2 F^2 + a1 F + a0 with F in degrees. Only trusted on [fov_min, fov_max].
struct CubicFov {
  std::array<double, 4> coeffs{-0.08506, 6.142, -159.5, 1720.0};  // a3, a2, a1, a0
  double fov_min_deg = 10.0;
  double fov_max_deg = 40.0;
  double back_focal = 0.82e-3;
};

using FovModel = std::variant<TangentFov, CubicFov>;

void validate(const FovModel& model);

// Full-cone FOV in degrees.
double fov_from_distance(const FovModel& model, double distance);

// Largest L in [0, f_b] meeting fov_req; throws InfeasibleFovError when none exists.
double max_distance_for_fov(const FovModel& model, double fov_req_deg);

// Widest FOV the model can offer (at L = 0, or at the fit limit).
double max_fov_deg(const FovModel& model);

// xi = xi_r * spot_fraction * CA^2 / (2 r_lns)^2. Pass spot_fraction = 1 to isolate the aperture term.
double optical_efficiency(const LensSpec& lens, double lens_radius, double spot_fraction = 0.5);

// Gaussian on-axis approximation 2 P_t r^2 / W_rx^2, requires W_rx >= 10 r.
double lens_received_power(double transmit_power, double beam_radius_rx, double lens_radius);

}  // namespace imgrx
