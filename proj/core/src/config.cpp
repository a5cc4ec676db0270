#include "imgrx/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "imgrx/errors.hpp"

namespace imgrx {

namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(v);
  while (std::getline(is, item, ',')) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& raw, const std::string& key) {
  const std::string s = trim(raw);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw ConfigError(key, "expected a finite number, got '" + raw + "'");
  return v;
}

int to_int(const std::string& raw, const std::string& key) {
  const std::string s = trim(raw);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError(key, "expected an integer, got '" + raw + "'");
  return v;
}

std::string format(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <class T>
struct Codec;

template <>
struct Codec<double> {
  static double read(const std::string& v, const std::string& k) { return to_double(v, k); }
  static std::optional<std::string> write(double v) { return format(v); }
};

template <>
struct Codec<int> {
  static int read(const std::string& v, const std::string& k) { return to_int(v, k); }
  static std::optional<std::string> write(int v) { return std::to_string(v); }
};

template <>
struct Codec<std::string> {
  static std::string read(const std::string& v, const std::string&) { return trim(v); }
  static std::optional<std::string> write(const std::string& v) { return v; }
};

template <class T>
struct Codec<std::optional<T>> {
  static std::optional<T> read(const std::string& v, const std::string& k) {
    return Codec<T>::read(v, k);
  }
  static std::optional<std::string> write(const std::optional<T>& v) {
    if (!v) return std::nullopt;
    return Codec<T>::write(*v);
  }
};

template <>
struct Codec<std::vector<int>> {
  static std::vector<int> read(const std::string& v, const std::string& k) {
    std::vector<int> out;
    for (const auto& item : split_list(v)) out.push_back(to_int(item, k));
    if (out.empty()) throw ConfigError(k, "expected a comma-separated list");
    return out;
  }
  static std::optional<std::string> write(const std::vector<int>& v) {
    if (v.empty()) return std::nullopt;
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
    return s;
  }
};

template <>
struct Codec<std::array<double, 4>> {
  static std::array<double, 4> read(const std::string& v, const std::string& k) {
    const auto items = split_list(v);
    if (items.size() != 4) throw ConfigError(k, "expected four comma-separated coefficients");
    std::array<double, 4> out{};
    for (std::size_t i = 0; i < 4; ++i) out[i] = to_double(items[i], k);
    return out;
  }
  static std::optional<std::string> write(const std::array<double, 4>& v) {
    return format(v[0]) + ", " + format(v[1]) + ", " + format(v[2]) + ", " + format(v[3]);
  }
};

struct Field {
  std::string section;
  std::string key;
  std::function<void(DesignConfig&, const std::string&)> read;
  std::function<std::optional<std::string>(const DesignConfig&)> write;
};

template <class T>
Field field(std::string section, std::string key, T& (*access)(DesignConfig&)) {
  const std::string name = section + "." + key;
  return {std::move(section), std::move(key),
          [access, name](DesignConfig& c, const std::string& v) {
            access(c) = Codec<T>::read(v, name);
          },
          [access](const DesignConfig& c) {
            return Codec<T>::write(access(const_cast<DesignConfig&>(c)));
          }};
}

const std::vector<Field>& fields() {
  using C = DesignConfig;
  static const std::vector<Field> table = {
      field("transmitter", "power_mw", +[](C& c) -> double& { return c.transmitter.power_mw; }),
      field("transmitter", "wavelength_nm",
            +[](C& c) -> double& { return c.transmitter.wavelength_nm; }),
      field("transmitter", "beam_radius_rx_cm",
            +[](C& c) -> double& { return c.transmitter.beam_radius_rx_cm; }),
      field("lens", "f_e_mm", +[](C& c) -> double& { return c.lens.f_e_mm; }),
      field("lens", "f_b_mm", +[](C& c) -> double& { return c.lens.f_b_mm; }),
      field("lens", "ca_mm", +[](C& c) -> double& { return c.lens.ca_mm; }),
      field("lens", "outer_diameter_mm", +[](C& c) -> double& { return c.lens.outer_diameter_mm; }),
      field("lens", "xi_r", +[](C& c) -> double& { return c.lens.xi_r; }),
      field("lens", "b0_um", +[](C& c) -> std::optional<double>& { return c.lens.b0_um; }),
      field("lens", "b1", +[](C& c) -> std::optional<double>& { return c.lens.b1; }),
      field("lens", "eta", +[](C& c) -> double& { return c.lens.eta; }),
      field("pd", "r_s_ohm", +[](C& c) -> double& { return c.pd.r_s_ohm; }),
      field("pd", "r_l_ohm", +[](C& c) -> double& { return c.pd.r_l_ohm; }),
      field("pd", "eps_r", +[](C& c) -> double& { return c.pd.eps_r; }),
      field("pd", "v_s", +[](C& c) -> double& { return c.pd.v_s; }),
      field("pd", "responsivity", +[](C& c) -> double& { return c.pd.responsivity; }),
      field("tia", "r_f_ohm", +[](C& c) -> double& { return c.tia.r_f_ohm; }),
      field("tia", "f_n_db", +[](C& c) -> double& { return c.tia.f_n_db; }),
      field("tia", "temperature_k", +[](C& c) -> double& { return c.tia.temperature_k; }),
      field("array", "D_um", +[](C& c) -> double& { return c.array.D_um; }),
      field("array", "ff_target", +[](C& c) -> double& { return c.array.ff_target; }),
      field("array", "d_min_um", +[](C& c) -> double& { return c.array.d_min_um; }),
      field("array", "n_pd", +[](C& c) -> std::optional<int>& { return c.array.n_pd; }),
      field("array", "n_pd_set", +[](C& c) -> std::vector<int>& { return c.array.n_pd_set; }),
      field("receiver", "Da_cm", +[](C& c) -> double& { return c.receiver.Da_cm; }),
      field("receiver", "n_a", +[](C& c) -> std::optional<int>& { return c.receiver.n_a; }),
      field("receiver", "n_a_set", +[](C& c) -> std::vector<int>& { return c.receiver.n_a_set; }),
      field("constraints", "fov_req_deg", +[](C& c) -> double& { return c.constraints.fov_req_deg; }),
      field("constraints", "ber_req", +[](C& c) -> double& { return c.constraints.ber_req; }),
      field("constraints", "gamma_req",
            +[](C& c) -> std::optional<double>& { return c.constraints.gamma_req; }),
      field("modulation", "scheme", +[](C& c) -> std::string& { return c.modulation.scheme; }),
      field("modulation", "n_sc", +[](C& c) -> std::optional<int>& { return c.modulation.n_sc; }),
      field("models", "fov_model", +[](C& c) -> std::string& { return c.models.fov_model; }),
      field("models", "cubic_coeffs",
            +[](C& c) -> std::optional<std::array<double, 4>>& { return c.models.cubic_coeffs; }),
      field("models", "beam_spot", +[](C& c) -> std::string& { return c.models.beam_spot; }),
      field("models", "p_r_lns_override_w",
            +[](C& c) -> std::optional<double>& { return c.models.p_r_lns_override_w; }),
      field("models", "p_r_lns_ref_n_a",
            +[](C& c) -> std::optional<int>& { return c.models.p_r_lns_ref_n_a; }),
      field("models", "outer_gain", +[](C& c) -> std::string& { return c.models.outer_gain; }),
  };
  return table;
}

const Field* find_field(const std::string& section, const std::string& key) {
  for (const auto& f : fields())
    if (f.section == section && f.key == key) return &f;
  return nullptr;
}

bool known_section(const std::string& section) {
  for (const auto& f : fields())
    if (f.section == section) return true;
  return false;
}

const std::vector<int> kDefaultPdCounts{1, 4, 9, 16, 25, 36, 49, 64, 81, 100};
constexpr int kDefaultOuterCount = 64;

std::vector<int> pd_counts(const DesignConfig& c) {
  if (!c.array.n_pd_set.empty()) return c.array.n_pd_set;
  if (c.array.n_pd) return {*c.array.n_pd};
  return kDefaultPdCounts;
}

std::vector<int> outer_counts(const DesignConfig& c) {
  if (!c.receiver.n_a_set.empty()) return c.receiver.n_a_set;
  if (c.receiver.n_a) return {*c.receiver.n_a};
  return {kDefaultOuterCount};
}

template <class F>
auto rethrow_as_config(const char* where, F&& f) {
  try {
    return f();
  } catch (const DomainError& e) {
    throw ConfigError(where, e.what());
  }
}

}  // namespace

DesignConfig parse_config(std::string_view text) {
  pt::ptree tree;
  std::istringstream is{std::string(text)};
  try {
    pt::ini_parser::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("syntax error at line " + std::to_string(e.line()) + ": " + e.message());
  }
  DesignConfig c;
  std::set<std::string> seen;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError(section, "key outside of any [section]");
    if (!known_section(section)) throw ConfigError(section, "unknown section");
    for (const auto& [key, value] : body) {
      const Field* f = find_field(section, key);
      if (!f) throw ConfigError(section + "." + key, "unknown key");
      if (!value.empty()) throw ConfigError(section + "." + key, "nested keys are not supported");
      seen.insert(section + "." + key);
      f->read(c, value.data());
    }
  }
  if (seen.count("array.n_pd") && seen.count("array.n_pd_set") &&
      std::find(c.array.n_pd_set.begin(), c.array.n_pd_set.end(), *c.array.n_pd) ==
          c.array.n_pd_set.end())
    throw ConfigError("array.n_pd", "must be a member of n_pd_set when both are given");
  if (seen.count("receiver.n_a") && seen.count("receiver.n_a_set") &&
      std::find(c.receiver.n_a_set.begin(), c.receiver.n_a_set.end(), *c.receiver.n_a) ==
          c.receiver.n_a_set.end())
    throw ConfigError("receiver.n_a", "must be a member of n_a_set when both are given");
  validate_config(c);
  return c;
}

DesignConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const DesignConfig& config) {
  std::string out;
  std::string current;
  for (const auto& f : fields()) {
    const auto v = f.write(config);
    if (!v) continue;
    if (f.section != current) {
      if (!current.empty()) out += "\n";
      out += "[" + f.section + "]\n";
      current = f.section;
    }
    out += f.key + " = " + *v + "\n";
  }
  return out;
}

void validate_config(const DesignConfig& c) {
  if (c.modulation.scheme != "ook" && c.modulation.scheme != "dco-ofdm")
    throw ConfigError("modulation.scheme", "expected 'ook' or 'dco-ofdm'");
  if (c.models.fov_model != "tangent" && c.models.fov_model != "cubic")
    throw ConfigError("models.fov_model", "expected 'tangent' or 'cubic'");
  if (c.models.beam_spot != "fitted" && c.models.beam_spot != "analytic")
    throw ConfigError("models.beam_spot", "expected 'fitted' or 'analytic'");
  if (c.models.outer_gain != "sqrt" && c.models.outer_gain != "linear")
    throw ConfigError("models.outer_gain", "expected 'sqrt' or 'linear'");
  if (c.models.beam_spot == "analytic" && (c.lens.b0_um || c.lens.b1))
    throw ConfigError("lens.b0_um", "b0/b1 are computed when models.beam_spot = analytic");
  if (c.modulation.n_sc && c.modulation.scheme != "dco-ofdm")
    throw ConfigError("modulation.n_sc", "only meaningful for dco-ofdm");
  if (c.models.cubic_coeffs && c.models.fov_model != "cubic")
    throw ConfigError("models.cubic_coeffs", "only meaningful for the cubic FOV model");
  if (c.models.p_r_lns_ref_n_a && !c.models.p_r_lns_override_w)
    throw ConfigError("models.p_r_lns_ref_n_a", "needs models.p_r_lns_override_w");

  const DesignSpace space = rethrow_as_config("config", [&] { return to_design_space(c); });
  rethrow_as_config("config", [&] { space.validate(); });
  rethrow_as_config("constraints", [&] { to_constraints(c).validate(); });
  const Scheme scheme = to_scheme(c);
  if (const auto* ofdm = std::get_if<DcoOfdm>(&scheme))
    rethrow_as_config("modulation.n_sc", [&] { ofdm->validate(); });
  if (c.models.fov_model == "cubic") {
    const auto& cubic = std::get<CubicFov>(space.fov);
    if (c.constraints.fov_req_deg < cubic.fov_min_deg ||
        c.constraints.fov_req_deg > cubic.fov_max_deg)
      throw ConfigError("constraints.fov_req_deg", "outside the cubic FOV fit range [10, 40] deg");
  }
  if (!(c.constraints.ber_req < 0.2) && c.modulation.scheme == "dco-ofdm")
    throw ConfigError("constraints.ber_req", "DCO-OFDM SNR gap needs BER < 0.2");
  // Lens pitch and link-budget validity depend only on N_a.
  for (int n_a : space.outer_counts)
    rethrow_as_config("receiver.n_a",
                      [&] { space.context(space.pd_counts.front(), n_a).validate(); });
}

DesignSpace to_design_space(const DesignConfig& c) {
  DesignSpace s;
  s.pd.series_resistance = c.pd.r_s_ohm;
  s.pd.load_resistance = c.pd.r_l_ohm;
  s.pd.relative_permittivity = c.pd.eps_r;
  s.pd.saturation_velocity = c.pd.v_s;
  s.pd.responsivity = c.pd.responsivity;

  s.tia.feedback_resistance = c.tia.r_f_ohm;
  s.tia.noise_figure_db = c.tia.f_n_db;
  s.tia.temperature = c.tia.temperature_k;

  s.lens.effective_focal = c.lens.f_e_mm * 1e-3;
  s.lens.back_focal = c.lens.f_b_mm * 1e-3;
  s.lens.clear_aperture = c.lens.ca_mm * 1e-3;
  s.lens.outer_diameter = c.lens.outer_diameter_mm * 1e-3;
  s.lens.transmission = c.lens.xi_r;
  s.lens.wavelength = c.transmitter.wavelength_nm * 1e-9;

  if (c.models.beam_spot == "analytic") {
    s.spot = beam_spot_coefficients(s.lens, c.lens.eta);
  } else {
    s.spot.b0 = c.lens.b0_um.value_or(1.0) * 1e-6;
    s.spot.b1 = c.lens.b1.value_or(0.69);
    s.spot.back_focal = s.lens.back_focal;
    s.spot.eta = c.lens.eta;
  }

  s.array_side = c.array.D_um * 1e-6;
  s.receiver_side = c.receiver.Da_cm * 1e-2;
  if (c.models.fov_model == "cubic") {
    CubicFov cubic;
    if (c.models.cubic_coeffs) cubic.coeffs = *c.models.cubic_coeffs;
    cubic.back_focal = s.lens.back_focal;
    s.fov = cubic;
  } else {
    s.fov = TangentFov{s.array_side, s.lens.effective_focal, s.lens.back_focal};
  }

  s.link.transmit_power = c.transmitter.power_mw * 1e-3;
  s.link.beam_radius_rx = c.transmitter.beam_radius_rx_cm * 1e-2;
  s.link.lens_power_override = c.models.p_r_lns_override_w;
  s.link.reference_outer_count = c.models.p_r_lns_ref_n_a.value_or(c.receiver.n_a.value_or(0));
  s.gain = c.models.outer_gain == "linear" ? OuterGain::Linear : OuterGain::Sqrt;
  s.pd_counts = pd_counts(c);
  s.outer_counts = outer_counts(c);
  return s;
}

DesignConstraints to_constraints(const DesignConfig& c) {
  DesignConstraints k;
  k.fov_req_deg = c.constraints.fov_req_deg;
  k.ber = c.constraints.ber_req;
  k.d_min = c.array.d_min_um * 1e-6;
  k.ff_target = c.array.ff_target;
  k.snr_required_override = c.constraints.gamma_req;
  return k;
}

Scheme to_scheme(const DesignConfig& c) {
  if (c.modulation.scheme == "dco-ofdm") return DcoOfdm{c.modulation.n_sc.value_or(512)};
  return Ook{};
}

std::pair<int, int> single_configuration(const DesignConfig& c) {
  const auto pick = [](const std::optional<int>& one, const std::vector<int>& set, int fallback,
                       const char* key) {
    if (one) return *one;
    if (set.size() == 1) return set.front();
    if (set.empty()) return fallback;
    throw ConfigError(key, "several values given; choose one configuration explicitly");
  };
  const int n_pd = pick(c.array.n_pd, c.array.n_pd_set, 0, "array.n_pd");
  if (n_pd == 0) throw ConfigError("array.n_pd", "no PD count given");
  return {n_pd, pick(c.receiver.n_a, c.receiver.n_a_set, kDefaultOuterCount, "receiver.n_a")};
}

}  // namespace imgrx
