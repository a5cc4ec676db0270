#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "commands.hpp"

using namespace imgrx;
using namespace imgrx::cli;
using doctest::Approx;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "imgrx");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string config_path(const char* name) { return std::string(IMGRX_CONFIG_DIR) + "/" + name; }

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> row;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) row.push_back(field);
    if (!line.empty() && line.back() == ',') row.emplace_back();
    rows.push_back(row);
  }
  return rows;
}

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = std::string(IMGRX_TEST_TMP) + "/" + name;
  std::ofstream(path) << text;
  return path;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("CSV formatting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  CHECK(csv_number(23.817440212345) == "23.8174402");
  CHECK(csv_number(1e-12) == "1e-12");
  CHECK(csv_number(820) == "820");
  CHECK(csv_row({"a", "b,c", ""}) == "a,\"b,c\",\n");
}

TEST_CASE("design on the bundled OOK config") {
  const auto r = run_cli({"design", "--config", config_path("reference_ook.cfg")});
  REQUIRE(r.code == Success);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["solution"]["rate_bps"].get<double>() == Approx(23.82e9).epsilon(5e-3));
  CHECK(j["solution"]["n_pd"] == 49);
  CHECK(j["solution"]["n_a"] == 64);
  CHECK(j["calibration"]["reference_d_delta_ratio"].get<double>() == Approx(1.0));
  CHECK(j["calibration"]["x5"].get<double>() == Approx(142.32).epsilon(1e-4));
}

TEST_CASE("design on the bundled DCO-OFDM config") {
  const auto r = run_cli({"design", "--config", config_path("reference_ofdm.cfg"), "--summary"});
  REQUIRE(r.code == Success);
  CHECK(r.out.find("N_PD = 36") != std::string::npos);
  CHECK(r.out.find("rate = 21.13") != std::string::npos);
}

TEST_CASE("report round-trips through JSON") {
  const auto report = make_report(load_config(config_path("reference_ofdm.cfg")));
  const auto text = to_json(report).dump();
  const auto back = report_from_json(nlohmann::json::parse(text));
  CHECK(back == report);
  CHECK(to_json(back).dump() == text);

  DesignConfig c = load_config(config_path("reference_ook.cfg"));
  c.constraints.fov_req_deg = 89.0;
  const auto infeasible = make_report(c);
  CHECK_FALSE(infeasible.slack.has_value());
  CHECK(report_from_json(to_json(infeasible)) == infeasible);
}

TEST_CASE("exit codes") {
  std::string text = read_file(config_path("reference_ook.cfg"));
  text.replace(text.find("fov_req_deg = 15"), 16, "fov_req_deg = 89");
  const auto wide = run_cli({"design", "--config", write_temp("wide.cfg", text)});
  CHECK(wide.code == Infeasible);
  CHECK(wide.err.find("field of view") != std::string::npos);

  const auto typo = run_cli({"design", "--config", write_temp("typo.cfg", "[array]\nD_uum = 1\n")});
  CHECK(typo.code == ConfigFailure);
  CHECK(typo.err.find("array.D_uum") != std::string::npos);

  CHECK(run_cli({"design", "--config", "/nonexistent.cfg"}).code == ConfigFailure);
  CHECK(run_cli({"unknown"}).code == ConfigFailure);
  CHECK(run_cli({}).code == ConfigFailure);
  CHECK(run_cli({"--help"}).code == Success);
  CHECK(run_cli({"sweep", "--fov-step", "0"}).code == ConfigFailure);
  CHECK(run_cli({"feasible", "--config", config_path("reference_ook.cfg"), "--grid", "7"}).code ==
        ConfigFailure);
  CHECK(run_cli({"snr-curve", "--config", config_path("reference_ook.cfg"), "--mc-samples", "10"})
            .code == ConfigFailure);
}

TEST_CASE("--out writes to a file") {
  const std::string path = std::string(IMGRX_TEST_TMP) + "/design.json";
  const auto r = run_cli({"design", "--config", config_path("reference_ook.cfg"), "--out", path});
  CHECK(r.code == Success);
  CHECK(r.out.empty());
  CHECK(nlohmann::json::parse(read_file(path))["solution"]["n_pd"] == 49);
}

TEST_CASE("sweep") {
  const auto r = run_cli({"sweep", "--config", config_path("reference_ook.cfg"), "--fov-min", "10",
                          "--fov-max", "40", "--fov-step", "2", "--best-only"});
  REQUIRE(r.code == Success);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 17);
  CHECK(rows[0] == std::vector<std::string>{"fov_req_deg", "n_pd", "n_a", "d_opt_um", "L_lo_um",
                                            "L_hi_um", "rate_gbps", "feasible"});
  double prev = 1e300;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double rate = std::stod(rows[i][6]);
    CHECK(rate <= prev * (1 + 1e-9));
    prev = rate;
  }
  CHECK(rows.back()[7] == "false");

  // One FOV point reproduces design.
  const auto one = parse_csv(run_cli({"sweep", "--config", config_path("reference_ook.cfg"),
                                      "--fov-min", "15", "--fov-max", "15", "--best-only"})
                                 .out);
  REQUIRE(one.size() == 2);
  CHECK(one[1][1] == "49");
  CHECK(std::stod(one[1][6]) == Approx(23.8174402));

  // Every configuration gets a row, feasible or not.
  const auto all = parse_csv(run_cli({"sweep", "--config", config_path("reference_ook.cfg"),
                                      "--fov-min", "38", "--fov-max", "39"})
                                 .out);
  CHECK(all.size() == 1 + 2 * 80);
  for (std::size_t i = 1; i < all.size(); ++i) CHECK(all[i][7] == "false");
}

TEST_CASE("snr-curve") {
  const auto r = run_cli({"snr-curve", "--config", config_path("reference_ook.cfg"), "--points", "9",
                          "--mc-samples", "0"});
  REQUIRE(r.code == Success);
  const auto rows = parse_csv(r.out);
  CHECK(rows[0] == std::vector<std::string>{"combiner", "L_um", "analytic_snr_db"});
  REQUIRE(rows.size() == 1 + 2 * 9);
  // At focus the spot is small: MRC - EGC = 10 log10(49).
  const double gap = std::stod(rows[9][2]) - std::stod(rows[18][2]);
  CHECK(gap == Approx(10 * std::log10(49.0)).epsilon(1e-6));

  const auto single = parse_csv(run_cli({"snr-curve", "--config", config_path("reference_ook.cfg"),
                                         "--n-pd", "1", "--points", "5", "--mc-samples", "10000",
                                         "--seed", "3"})
                                    .out);
  CHECK(single[0].size() == 5);
  // One PD: the combiners coincide. The intermediate-spot closed forms use different
  // approximations, so the analytic columns only agree in the limiting regimes.
  for (int i = 1; i <= 5; ++i) CHECK(single[i][3] == single[i + 5][3]);
  for (int i : {1, 2, 5}) CHECK(single[i][2] == single[i + 5][2]);

  const auto again = run_cli({"snr-curve", "--config", config_path("reference_ook.cfg"), "--n-pd", "1",
                              "--points", "5", "--mc-samples", "10000", "--seed", "3"});
  CHECK(parse_csv(again.out) == single);
}

TEST_CASE("feasible-region dump") {
  const auto r = run_cli({"feasible", "--config", config_path("reference_ofdm.cfg"), "--n-pd", "36",
                          "--grid", "40x60"});
  REQUIRE(r.code == Success);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 1 + 40 * 60);
  CHECK(rows[0] == std::vector<std::string>{"d_um", "L_um", "problem_id", "satisfies_all"});
  int small = 0, large = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][3] != "true") continue;
    small += rows[i][2] == "1";
    large += rows[i][2] == "3";
  }
  CHECK(small > 0);
  CHECK(large == 0);
}

TEST_CASE("validate flags a perturbed material") {
  std::string text = read_file(config_path("reference_ook.cfg"));
  text.replace(text.find("eps_r = 11.7"), 12, "eps_r = 20");
  const auto r = run_cli({"validate", "--config", write_temp("eps.cfg", text), "--json",
                          "--mc-samples", "10000"});
  CHECK(r.code == CheckFailure);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["passed"] == false);
  CHECK(j["checks"][0]["id"] == 1);
  CHECK(j["checks"][0]["passed"] == false);
  CHECK(j["checks"].size() == 14);
}
