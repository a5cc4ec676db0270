#include <string>

#include <doctest.h>

#include "imgrx/config.hpp"
#include "imgrx/errors.hpp"

using namespace imgrx;
using doctest::Approx;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const char* kFull = R"(; comment line
[transmitter]
power_mw = 12.5
wavelength_nm = 850

[lens]
b0_um = 0.8
b1 = 0.7

[array]
D_um = 500
n_pd = 36
n_pd_set = 25, 36, 49

[receiver]
n_a_set = 16, 64

[constraints]
fov_req_deg = 20
ber_req = 1e-4
gamma_req = 12

[modulation]
scheme = dco-ofdm
n_sc = 256

[models]
fov_model = cubic
cubic_coeffs = -0.08, 6.1, -160, 1700
p_r_lns_override_w = 5e-06
outer_gain = linear
)";

}  // namespace

TEST_CASE("empty text gives the defaults") {
  const auto c = parse_config("");
  CHECK(c == DesignConfig{});
  CHECK(c.array.D_um == 400.0);
  CHECK(c.tia.r_f_ohm == 500.0);
  CHECK(c.modulation.scheme == "ook");
}

TEST_CASE("all sections parse") {
  const auto c = parse_config(kFull);
  CHECK(c.transmitter.power_mw == 12.5);
  CHECK(c.lens.b0_um == 0.8);
  CHECK(c.array.n_pd == 36);
  CHECK(c.array.n_pd_set == std::vector<int>{25, 36, 49});
  CHECK(c.receiver.n_a_set == std::vector<int>{16, 64});
  CHECK(c.constraints.gamma_req == 12.0);
  CHECK(c.modulation.n_sc == 256);
  CHECK(c.models.cubic_coeffs.has_value());
  CHECK((*c.models.cubic_coeffs)[3] == 1700.0);
}

TEST_CASE("load, serialize, load is the identity") {
  for (const char* text : {"", kFull}) {
    const auto a = parse_config(text);
    const auto b = parse_config(serialize_config(a));
    CHECK(a == b);
    CHECK(serialize_config(a) == serialize_config(b));
  }
  DesignConfig odd;
  odd.transmitter.power_mw = 0.1 + 0.2;  // not exactly representable in short decimal
  odd.lens.b1 = 1.0 / 3.0;
  CHECK(parse_config(serialize_config(odd)) == odd);
}

TEST_CASE("bundled configs load") {
  for (const char* name : {"reference_ook.cfg", "reference_ofdm.cfg"}) {
    const auto c = load_config(std::string(IMGRX_CONFIG_DIR) + "/" + name);
    CHECK(c.models.outer_gain == "linear");
    CHECK(parse_config(serialize_config(c)) == c);
    CHECK(single_configuration(c) == std::pair{49, 64});
  }
}

TEST_CASE("conversion to SI") {
  const auto c = parse_config(kFull);
  const auto s = to_design_space(c);
  CHECK(s.array_side == Approx(500e-6));
  CHECK(s.spot.b0 == Approx(0.8e-6));
  CHECK(s.spot.b1 == 0.7);
  CHECK(s.link.transmit_power == Approx(12.5e-3));
  CHECK(s.link.lens_power_override == 5e-6);
  CHECK(s.gain == OuterGain::Linear);
  CHECK(s.pd_counts == std::vector<int>{25, 36, 49});
  CHECK(std::holds_alternative<CubicFov>(s.fov));

  const auto k = to_constraints(c);
  CHECK(k.fov_req_deg == 20.0);
  CHECK(k.ber == 1e-4);
  CHECK(k.d_min == Approx(10e-6));
  CHECK(k.snr_required_override == 12.0);

  const auto scheme = to_scheme(c);
  REQUIRE(std::holds_alternative<DcoOfdm>(scheme));
  CHECK(std::get<DcoOfdm>(scheme).subcarriers == 256);
}

TEST_CASE("analytic beam-spot mode") {
  const auto s = to_design_space(parse_config("[models]\nbeam_spot = analytic\n"));
  CHECK(s.spot.b1 == Approx(0.68905).epsilon(1e-5));
  CHECK(error_of("[lens]\nb1 = 0.7\n[models]\nbeam_spot = analytic\n").find("lens.b0_um") == 0);
}

TEST_CASE("unknown keys and sections are rejected by name") {
  CHECK(error_of("[array]\nD_uum = 400\n").find("array.D_uum") == 0);
  CHECK(error_of("[arrays]\nD_um = 400\n").find("arrays") == 0);
  CHECK(error_of("D_um = 400\n").find("D_um") == 0);
}

TEST_CASE("invalid values are rejected by name") {
  CHECK(error_of("[array]\nD_um = abc\n").find("array.D_um") == 0);
  CHECK(error_of("[array]\nD_um = 400um\n").find("array.D_um") == 0);
  CHECK(error_of("[array]\nn_pd = 50\n").find("config") == 0);
  CHECK(error_of("[array]\nn_pd = 9\nn_pd_set = 4, 16\n").find("array.n_pd") == 0);
  CHECK(error_of("[modulation]\nscheme = qam\n").find("modulation.scheme") == 0);
  CHECK(error_of("[modulation]\nn_sc = 64\n").find("modulation.n_sc") == 0);
  CHECK(error_of("[modulation]\nscheme = dco-ofdm\nn_sc = 63\n").find("modulation.n_sc") == 0);
  CHECK(error_of("[models]\nfov_model = cubic\n[constraints]\nfov_req_deg = 45\n")
            .find("constraints.fov_req_deg") == 0);
  CHECK(error_of("[models]\np_r_lns_ref_n_a = 64\n").find("models.p_r_lns_ref_n_a") == 0);
  CHECK(error_of("[receiver]\nn_a = 2\n").find("config") == 0);
  CHECK(error_of("[receiver]\nDa_cm = 0.1\nn_a = 64\n").find("receiver.n_a") == 0);
  CHECK(error_of("[constraints]\nber_req = 0.7\n").find("constraints") == 0);
  CHECK_FALSE(error_of("[array\n").empty());
}

TEST_CASE("single configuration selection") {
  CHECK_THROWS_AS(single_configuration(DesignConfig{}), ConfigError);
  auto c = parse_config("[array]\nn_pd_set = 16\n");
  CHECK(single_configuration(c) == std::pair{16, 64});
  c = parse_config("[array]\nn_pd_set = 16, 25\n");
  CHECK_THROWS_AS(single_configuration(c), ConfigError);
}
