#include "imgrx/photodetector.hpp"

#include <cmath>
#include <string>

#include "imgrx/constants.hpp"
#include "imgrx/errors.hpp"

namespace imgrx {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

double rc_coefficient(const PinPhotodetector& pd) {
  return 2.0 * constants::pi * pd.total_resistance() * constants::vacuum_permittivity *
         pd.relative_permittivity;
}

}  // namespace

void PinPhotodetector::validate_material() const {
  require(std::isfinite(series_resistance) && series_resistance >= 0.0,
          "series resistance must be >= 0");
  require(std::isfinite(load_resistance) && load_resistance >= 0.0, "load resistance must be >= 0");
  require(total_resistance() > 0.0, "total resistance must be > 0");
  require(std::isfinite(relative_permittivity) && relative_permittivity >= 1.0,
          "relative permittivity must be >= 1");
  require(std::isfinite(saturation_velocity) && saturation_velocity > 0.0,
          "saturation velocity must be > 0");
  require(std::isfinite(responsivity) && responsivity > 0.0, "responsivity must be > 0");
}

void PinPhotodetector::validate() const {
  validate_material();
  require(std::isfinite(side) && side > 0.0, "photodetector side must be > 0");
}

void TiaConfig::validate() const {
  require(std::isfinite(feedback_resistance) && feedback_resistance > 0.0,
          "feedback resistance must be > 0");
  require(std::isfinite(noise_figure_db), "noise figure must be finite");
  require(std::isfinite(temperature) && temperature > 0.0, "temperature must be > 0 K");
}

double bandwidth(const PinPhotodetector& pd, double depletion_length) {
  pd.validate();
  require(std::isfinite(depletion_length) && depletion_length > 0.0,
          "depletion length must be > 0");
  const double rc = rc_coefficient(pd) * pd.side * pd.side / depletion_length;
  const double transit = depletion_length / (0.44 * pd.saturation_velocity);
  return 1.0 / std::hypot(rc, transit);
}

double optimal_depletion_length(const PinPhotodetector& pd) {
  pd.validate();
  return pd.side * std::sqrt(0.88 * constants::pi * pd.total_resistance() *
                             constants::vacuum_permittivity * pd.relative_permittivity *
                             pd.saturation_velocity);
}

double transit_constant(const PinPhotodetector& pd) {
  pd.validate_material();
  return std::sqrt(2.0 * rc_coefficient(pd) / (0.44 * pd.saturation_velocity));
}

double bandwidth_optimal(const PinPhotodetector& pd) {
  pd.validate();
  return 1.0 / (transit_constant(pd) * pd.side);
}

double bandwidth_optimal(const PinPhotodetector& material, double side) {
  PinPhotodetector pd = material;
  pd.side = side;
  return bandwidth_optimal(pd);
}

ThermalNoise::ThermalNoise(const TiaConfig& tia) {
  tia.validate();
  noise_figure_ = std::pow(10.0, tia.noise_figure_db / 10.0);
  density_ = 4.0 * constants::boltzmann * tia.temperature * noise_figure_ / tia.feedback_resistance;
}

double ThermalNoise::variance(double bandwidth) const {
  require(std::isfinite(bandwidth) && bandwidth > 0.0, "bandwidth must be > 0");
  return density_ * bandwidth;
}

double thermal_noise_variance(const TiaConfig& tia, double bandwidth) {
  return ThermalNoise(tia).variance(bandwidth);
}

}  // namespace imgrx
