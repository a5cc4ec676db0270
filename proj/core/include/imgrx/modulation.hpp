#pragma once

#include <string>
#include <variant>

namespace imgrx {

struct Ook {};

struct DcoOfdm {
  int subcarriers = 512;
  void validate() const;
};

using Scheme = std::variant<Ook, DcoOfdm>;

std::string to_string(const Scheme& scheme);

// Standard normal tail probability.
double q_function(double x);
double q_inverse(double p);

// Gamma = -ln(5 BER) / 1.5, valid for BER < 0.2.
double snr_gap(double ber);

// OOK: Q^-1(BER)^2. DCO-OFDM: Gamma (M - 1) with 4-QAM as the smallest loading.
double snr_required(const Scheme& scheme, double ber);

// nu = (N_sc - 2) / N_sc.
double spectral_factor(const DcoOfdm& scheme);

double rate_ook(double bandwidth);
double rate_ofdm(double bandwidth, double snr, const DcoOfdm& scheme, double ber);

// Positive root of k x / (1 + x) = ln(1 + x), k in {3, 5}.
double extremum_constant(int k);

}  // namespace imgrx
