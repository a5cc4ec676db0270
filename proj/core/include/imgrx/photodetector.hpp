#pragma once

namespace imgrx {

// Square PIN photodiode followed by a TIA. Lengths in metres, SI throughout.
struct PinPhotodetector {
  double side = 0.0;                    // d
  double series_resistance = 7.0;       // R_s
  double load_resistance = 50.0;        // R_L, TIA input
  double relative_permittivity = 11.7;  // silicon
  double saturation_velocity = 4.8e4;   // m/s
  double responsivity = 0.5;            // A/W

  double total_resistance() const { return series_resistance + load_resistance; }

  // Material checks only; `side` may still be zero for a template.
  void validate_material() const;
  void validate() const;
};

struct TiaConfig {
  double feedback_resistance = 500.0;  // R_f
  double noise_figure_db = 5.0;
  double temperature = 300.0;  // K

  void validate() const;
};

// Bandwidth for an arbitrary depletion-region length.
double bandwidth(const PinPhotodetector& pd, double depletion_length);

// Depletion length that maximizes bandwidth for the photodetector's side.
double optimal_depletion_length(const PinPhotodetector& pd);

// C_t such that B_opt(d) = 1 / (C_t d). Independent of pd.side.
double transit_constant(const PinPhotodetector& pd);

double bandwidth_optimal(const PinPhotodetector& pd);
double bandwidth_optimal(const PinPhotodetector& material, double side);

// Thermal noise of the TIA; the noise figure is converted to linear once.
class ThermalNoise {
 public:
  explicit ThermalNoise(const TiaConfig& tia);

  double noise_figure() const { return noise_figure_; }
  double density() const { return density_; }  // A^2/Hz
  double variance(double bandwidth) const;

 private:
  double noise_figure_;
  double density_;
};

double thermal_noise_variance(const TiaConfig& tia, double bandwidth);

}  // namespace imgrx
