#pragma once

#include <span>

#include "imgrx/array_geometry.hpp"
#include "imgrx/photodetector.hpp"

namespace imgrx {

enum class Combiner { Mrc, Egc };

// How the SNR of N_a identical inner arrays combines. Sqrt is the default.
enum class OuterGain { Sqrt, Linear };

const char* to_string(Combiner c);
const char* to_string(OuterGain g);

// Everything the averaged SNR needs except the design variables (d, W2).
struct SnrContext {
  PinPhotodetector pd;  // material; side is ignored
  TiaConfig tia;
  double array_side = 400e-6;  // D
  int pd_count = 1;            // N_PD
  OuterArray outer;
  double efficiency = 0.0;  // xi
  double lens_power = 0.0;  // P_r,lns
  OuterGain gain = OuterGain::Sqrt;

  void validate() const;
  double outer_factor() const;
  double signal_current() const { return pd.responsivity * efficiency * lens_power; }
  InnerArray inner(double pd_side) const { return {pd_count, array_side, pd_side}; }
  // sigma^2 with B = bandwidth_optimal(d).
  double noise_variance(double pd_side) const;
};

double mrc_snr_exact(std::span<const double> powers, double responsivity, double noise_variance);
double egc_snr_exact(std::span<const double> powers, double responsivity, double noise_variance);

// Averaged SNR of the whole receiver built branch by branch from sigma^2 and FF.
double avg_mrc_snr(const SnrContext& ctx, double pd_side, double spot_radius);
double avg_egc_snr(const SnrContext& ctx, double pd_side, double spot_radius);
double avg_snr(const SnrContext& ctx, double pd_side, double spot_radius, Combiner combiner);

// One branch of the MRC average evaluated regardless of which regime W2 falls in.
double avg_mrc_branch(const SnrContext& ctx, double pd_side, double spot_radius, Regime branch);

// A_x such that the small-spot MRC SNR equals d^3 / A_x (m^3).
double ax_constant(const SnrContext& ctx);

// Same MRC average written through A_x.
double avg_mrc_snr_reduced(double ax, double array_side, double pd_side, double spot_radius);

double mrc_egc_gain_db(int pd_count);

// Exact SNR of one beam placement on every inner array, times the outer-array factor.
double placement_snr(const SnrContext& ctx, double pd_side, const BeamFootprint& footprint,
                     Combiner combiner);

}  // namespace imgrx
