#include "report.hpp"

#include <cmath>
#include <sstream>

#include "imgrx/errors.hpp"

namespace imgrx::cli {

using nlohmann::json;

namespace {

template <class T>
struct is_optional : std::false_type {};
template <class T>
struct is_optional<std::optional<T>> : std::true_type {};

template <class C, class V>
void visit_config(C& c, V&& v) {
  v("transmitter", "power_mw", c.transmitter.power_mw);
  v("transmitter", "wavelength_nm", c.transmitter.wavelength_nm);
  v("transmitter", "beam_radius_rx_cm", c.transmitter.beam_radius_rx_cm);
  v("lens", "f_e_mm", c.lens.f_e_mm);
  v("lens", "f_b_mm", c.lens.f_b_mm);
  v("lens", "ca_mm", c.lens.ca_mm);
  v("lens", "outer_diameter_mm", c.lens.outer_diameter_mm);
  v("lens", "xi_r", c.lens.xi_r);
  v("lens", "b0_um", c.lens.b0_um);
  v("lens", "b1", c.lens.b1);
  v("lens", "eta", c.lens.eta);
  v("pd", "r_s_ohm", c.pd.r_s_ohm);
  v("pd", "r_l_ohm", c.pd.r_l_ohm);
  v("pd", "eps_r", c.pd.eps_r);
  v("pd", "v_s", c.pd.v_s);
  v("pd", "responsivity", c.pd.responsivity);
  v("tia", "r_f_ohm", c.tia.r_f_ohm);
  v("tia", "f_n_db", c.tia.f_n_db);
  v("tia", "temperature_k", c.tia.temperature_k);
  v("array", "D_um", c.array.D_um);
  v("array", "ff_target", c.array.ff_target);
  v("array", "d_min_um", c.array.d_min_um);
  v("array", "n_pd", c.array.n_pd);
  v("array", "n_pd_set", c.array.n_pd_set);
  v("receiver", "Da_cm", c.receiver.Da_cm);
  v("receiver", "n_a", c.receiver.n_a);
  v("receiver", "n_a_set", c.receiver.n_a_set);
  v("constraints", "fov_req_deg", c.constraints.fov_req_deg);
  v("constraints", "ber_req", c.constraints.ber_req);
  v("constraints", "gamma_req", c.constraints.gamma_req);
  v("modulation", "scheme", c.modulation.scheme);
  v("modulation", "n_sc", c.modulation.n_sc);
  v("models", "fov_model", c.models.fov_model);
  v("models", "cubic_coeffs", c.models.cubic_coeffs);
  v("models", "beam_spot", c.models.beam_spot);
  v("models", "p_r_lns_override_w", c.models.p_r_lns_override_w);
  v("models", "p_r_lns_ref_n_a", c.models.p_r_lns_ref_n_a);
  v("models", "outer_gain", c.models.outer_gain);
}

template <class E>
E enum_from_string(const std::string& s, std::initializer_list<E> values, const char* what) {
  for (E e : values)
    if (s == to_string(e)) return e;
  throw ConfigError(what, "unknown value '" + s + "'");
}

json solution_to_json(const DesignSolution& s) {
  return {{"feasible", s.feasible},
          {"pd_side_m", s.pd_side},
          {"distance_lo_m", s.distance_lo},
          {"distance_hi_m", s.distance_hi},
          {"regime", to_string(s.regime)},
          {"case_id", s.case_id},
          {"rate_bps", s.rate},
          {"snr", s.snr},
          {"n_pd", s.pd_count},
          {"n_a", s.outer_count},
          {"failed_constraint", to_string(s.failed)},
          {"diagnostic", s.diagnostic}};
}

DesignSolution solution_from_json(const json& j) {
  DesignSolution s;
  j.at("feasible").get_to(s.feasible);
  j.at("pd_side_m").get_to(s.pd_side);
  j.at("distance_lo_m").get_to(s.distance_lo);
  j.at("distance_hi_m").get_to(s.distance_hi);
  s.regime = enum_from_string(j.at("regime").get<std::string>(),
                              {Regime::SmallSpot, Regime::Intermediate, Regime::LargeSpot},
                              "solution.regime");
  j.at("case_id").get_to(s.case_id);
  j.at("rate_bps").get_to(s.rate);
  j.at("snr").get_to(s.snr);
  j.at("n_pd").get_to(s.pd_count);
  j.at("n_a").get_to(s.outer_count);
  s.failed = enum_from_string(j.at("failed_constraint").get<std::string>(),
                              {FailedConstraint::None, FailedConstraint::FieldOfView,
                               FailedConstraint::SideBounds, FailedConstraint::Snr},
                              "solution.failed_constraint");
  j.at("diagnostic").get_to(s.diagnostic);
  return s;
}

}  // namespace

json config_to_json(const DesignConfig& config) {
  json j = json::object();
  visit_config(config, [&](const char* section, const char* key, const auto& value) {
    using T = std::decay_t<decltype(value)>;
    auto& sec = j[section];
    if constexpr (is_optional<T>::value) {
      if (value) sec[key] = *value;
    } else {
      sec[key] = value;
    }
  });
  return j;
}

DesignConfig config_from_json(const json& j) {
  DesignConfig c;
  visit_config(c, [&](const char* section, const char* key, auto& value) {
    using T = std::decay_t<decltype(value)>;
    if (!j.contains(section) || !j.at(section).contains(key)) return;
    const auto& v = j.at(section).at(key);
    if constexpr (is_optional<T>::value)
      value = v.get<typename T::value_type>();
    else
      v.get_to(value);
  });
  validate_config(c);
  return c;
}

json to_json(const DesignReport& r) {
  json j;
  j["config"] = config_to_json(r.config);
  j["scheme"] = r.scheme;
  j["solution"] = solution_to_json(r.solution);
  if (r.slack) {
    j["slack"] = {{"snr_margin_db", r.slack->snr_margin_db},
                  {"pd_side_above_min_m", r.slack->pd_side_above_min},
                  {"pd_side_below_max_m", r.slack->pd_side_below_max},
                  {"fov_margin_deg", r.slack->fov_margin_deg}};
  } else {
    j["slack"] = nullptr;
  }
  const auto& c = r.calibration;
  j["calibration"] = {{"transit_constant", c.transit_constant},
                      {"ax_m3", c.ax},
                      {"snr_required", c.snr_required},
                      {"snr_gap", c.gap},
                      {"x3", c.x3},
                      {"x5", c.x5},
                      {"d_delta_m", c.d_delta},
                      {"reference_d_delta_m", c.reference_d_delta},
                      {"reference_d_delta_ratio", c.reference_ratio}};
  j["configurations"] = r.configurations;
  j["feasible_configurations"] = r.feasible_configurations;
  return j;
}

DesignReport report_from_json(const json& j) {
  DesignReport r;
  r.config = config_from_json(j.at("config"));
  j.at("scheme").get_to(r.scheme);
  r.solution = solution_from_json(j.at("solution"));
  if (const auto& s = j.at("slack"); !s.is_null()) {
    Slack k;
    s.at("snr_margin_db").get_to(k.snr_margin_db);
    s.at("pd_side_above_min_m").get_to(k.pd_side_above_min);
    s.at("pd_side_below_max_m").get_to(k.pd_side_below_max);
    s.at("fov_margin_deg").get_to(k.fov_margin_deg);
    r.slack = k;
  }
  const auto& c = j.at("calibration");
  c.at("transit_constant").get_to(r.calibration.transit_constant);
  c.at("ax_m3").get_to(r.calibration.ax);
  c.at("snr_required").get_to(r.calibration.snr_required);
  c.at("snr_gap").get_to(r.calibration.gap);
  c.at("x3").get_to(r.calibration.x3);
  c.at("x5").get_to(r.calibration.x5);
  c.at("d_delta_m").get_to(r.calibration.d_delta);
  c.at("reference_d_delta_m").get_to(r.calibration.reference_d_delta);
  c.at("reference_d_delta_ratio").get_to(r.calibration.reference_ratio);
  j.at("configurations").get_to(r.configurations);
  j.at("feasible_configurations").get_to(r.feasible_configurations);
  return r;
}

std::string summary(const DesignReport& r) {
  std::ostringstream os;
  os.precision(6);
  const auto& s = r.solution;
  os << "scheme: " << r.scheme << ", FOV_req " << r.config.constraints.fov_req_deg << " deg, "
     << r.feasible_configurations << "/" << r.configurations << " configurations feasible\n";
  if (!s.feasible) {
    os << "infeasible: " << to_string(s.failed) << " (" << s.diagnostic << ")\n";
    return os.str();
  }
  os << "N_PD = " << s.pd_count << ", N_a = " << s.outer_count << "\n"
     << "d_opt = " << s.pd_side * 1e6 << " um, L in [" << s.distance_lo * 1e6 << ", "
     << s.distance_hi * 1e6 << "] um (" << to_string(s.regime) << ", " << s.case_id << ")\n"
     << "rate = " << s.rate / 1e9 << " Gbps, SNR = " << 10.0 * std::log10(s.snr) << " dB\n";
  if (r.slack)
    os << "SNR margin " << r.slack->snr_margin_db << " dB, FOV margin "
       << r.slack->fov_margin_deg << " deg\n";
  os << "d_Delta(49, 64) = " << r.calibration.reference_d_delta * 1e6 << " um ("
     << r.calibration.reference_ratio << " x 44.81 um)\n";
  return os.str();
}

}  // namespace imgrx::cli
