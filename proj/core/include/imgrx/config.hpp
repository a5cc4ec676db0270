#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "imgrx/optimizer.hpp"

namespace imgrx {

// Sectioned design file. Values keep the units named in their keys so that
// parse(serialize(c)) == c holds exactly; conversion to SI happens in to_design_space().
struct DesignConfig {
  struct Transmitter {
    double power_mw = 10.0;
    double wavelength_nm = 850.0;
    double beam_radius_rx_cm = 10.0;
    bool operator==(const Transmitter&) const = default;
  } transmitter;

  struct Lens {
    double f_e_mm = 1.45;
    double f_b_mm = 0.82;
    double ca_mm = 1.6;
    double outer_diameter_mm = 2.4;
    double xi_r = 0.88;
    std::optional<double> b0_um;
    std::optional<double> b1;
    double eta = 0.5;
    bool operator==(const Lens&) const = default;
  } lens;

  struct Pd {
    double r_s_ohm = 7.0;
    double r_l_ohm = 50.0;
    double eps_r = 11.7;
    double v_s = 4.8e4;
    double responsivity = 0.5;
    bool operator==(const Pd&) const = default;
  } pd;

  struct Tia {
    double r_f_ohm = 500.0;
    double f_n_db = 5.0;
    double temperature_k = 300.0;
    bool operator==(const Tia&) const = default;
  } tia;

  struct Array {
    double D_um = 400.0;
    double ff_target = 0.64;
    double d_min_um = 10.0;
    std::optional<int> n_pd;
    std::vector<int> n_pd_set;
    bool operator==(const Array&) const = default;
  } array;

  struct Receiver {
    double Da_cm = 2.0;
    std::optional<int> n_a;
    std::vector<int> n_a_set;
    bool operator==(const Receiver&) const = default;
  } receiver;

  struct Constraints {
    double fov_req_deg = 15.0;
    double ber_req = 1e-3;
    std::optional<double> gamma_req;
    bool operator==(const Constraints&) const = default;
  } constraints;

  struct Modulation {
    std::string scheme = "ook";
    std::optional<int> n_sc;
    bool operator==(const Modulation&) const = default;
  } modulation;

  struct Models {
    std::string fov_model = "tangent";
    std::optional<std::array<double, 4>> cubic_coeffs;
    std::string beam_spot = "fitted";
    std::optional<double> p_r_lns_override_w;
    std::optional<int> p_r_lns_ref_n_a;
    std::string outer_gain = "sqrt";
    bool operator==(const Models&) const = default;
  } models;

  bool operator==(const DesignConfig&) const = default;
};

// Throws ConfigError on syntax errors, unknown sections or keys, and invalid values.
DesignConfig parse_config(std::string_view text);
DesignConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const DesignConfig& config);

// Re-validates every module invariant; throws ConfigError.
void validate_config(const DesignConfig& config);

DesignSpace to_design_space(const DesignConfig& config);
DesignConstraints to_constraints(const DesignConfig& config);
Scheme to_scheme(const DesignConfig& config);

// The single (N_PD, N_a) pair used by per-configuration commands.
std::pair<int, int> single_configuration(const DesignConfig& config);

}  // namespace imgrx
