#include "commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "imgrx/errors.hpp"
#include "imgrx/oracle.hpp"
#include "imgrx/validation.hpp"

namespace imgrx::cli {

namespace {

constexpr std::uint64_t kCurveSamples = 10000;

DesignConfig load(const Options& o, std::ostream& err) {
  DesignConfig c = resolve_config(o);
  if (c.models.fov_model == "cubic")
    err << "warning: the cubic FOV fit is empirical and only defined for 10-40 deg\n";
  return c;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  v.back() = hi;
  return v;
}

std::string um(double metres) { return csv_number(metres * 1e6); }

double to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string q = "\"";
  for (char ch : text) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

std::string csv_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 9);
  return {buf, r.ptr};
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += csv_field(fields[i]);
  }
  return line + '\n';
}

DesignConfig resolve_config(const Options& o) {
  DesignConfig c = o.config ? load_config(*o.config) : DesignConfig{};
  if (o.n_pd) {
    c.array.n_pd = *o.n_pd;
    c.array.n_pd_set = {*o.n_pd};
  }
  if (o.n_a) {
    c.receiver.n_a = *o.n_a;
    c.receiver.n_a_set = {*o.n_a};
  }
  if (o.n_pd || o.n_a) validate_config(c);
  return c;
}

DesignReport make_report(const DesignConfig& config) {
  const DesignSpace space = to_design_space(config);
  const DesignConstraints constraints = to_constraints(config);
  const Scheme scheme = to_scheme(config);
  const GlobalSolution g = solve_global(space, constraints, scheme);

  DesignReport r;
  r.config = config;
  r.scheme = to_string(scheme);
  r.solution = g.best;
  r.configurations = static_cast<int>(g.configurations.size());
  for (const auto& s : g.configurations) r.feasible_configurations += s.feasible;

  const int n_pd = g.best.feasible ? g.best.pd_count : space.pd_counts.front();
  const int n_a = g.best.feasible ? g.best.outer_count : space.outer_counts.front();
  const DesignProblem p(space.context(n_pd, n_a), constraints, scheme);
  auto& cal = r.calibration;
  cal.transit_constant = p.transit();
  cal.ax = p.ax();
  cal.snr_required = p.snr_required();
  cal.gap = snr_gap(constraints.ber);
  cal.x3 = extremum_constant(3);
  cal.x5 = extremum_constant(5);
  cal.d_delta = p.sides().d_delta();
  const auto ref = calibration_diagnostic(space, constraints);
  cal.reference_d_delta = ref.d_delta;
  cal.reference_ratio = ref.ratio;

  if (g.best.feasible) {
    const auto& s = g.best;
    r.slack = Slack{to_db(s.snr / p.snr_required()), s.pd_side - p.d_min(), p.d_max() - s.pd_side,
                    fov_from_distance(space.fov, s.distance_hi) - constraints.fov_req_deg};
  }
  return r;
}

int cmd_design(const Options& o, std::ostream& out, std::ostream& err) {
  const DesignReport r = make_report(load(o, err));
  if (o.summary)
    out << summary(r);
  else
    out << to_json(r).dump(2) << '\n';
  if (!r.solution.feasible) err << "infeasible: " << r.solution.diagnostic << '\n';
  return r.solution.feasible ? Success : Infeasible;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  if (!(o.fov_step > 0.0)) throw ConfigError("--fov-step", "must be > 0");
  if (!(o.fov_max >= o.fov_min)) throw ConfigError("--fov-max", "must be >= --fov-min");
  const DesignConfig c = load(o, err);
  const DesignSpace space = to_design_space(c);
  DesignConstraints constraints = to_constraints(c);
  const Scheme scheme = to_scheme(c);

  out << csv_row({"fov_req_deg", "n_pd", "n_a", "d_opt_um", "L_lo_um", "L_hi_um", "rate_gbps",
                  "feasible"});
  const auto emit = [&](double fov, const DesignSolution& s, int n_pd, int n_a) {
    if (s.feasible)
      out << csv_row({csv_number(fov), std::to_string(n_pd), std::to_string(n_a), um(s.pd_side),
                      um(s.distance_lo), um(s.distance_hi), csv_number(s.rate / 1e9), "true"});
    else
      out << csv_row({csv_number(fov), std::to_string(n_pd), std::to_string(n_a), "", "", "",
                      "0", "false"});
  };
  const int steps = static_cast<int>(std::floor((o.fov_max - o.fov_min) / o.fov_step + 1e-9));
  for (int k = 0; k <= steps; ++k) {
    const double fov = o.fov_min + k * o.fov_step;
    constraints.fov_req_deg = fov;
    const GlobalSolution g = solve_global(space, constraints, scheme);
    if (o.best_only) {
      emit(fov, g.best, g.best.pd_count, g.best.outer_count);
      continue;
    }
    std::size_t idx = 0;
    for (int n_pd : space.pd_counts)
      for (int n_a : space.outer_counts) emit(fov, g.configurations[idx++], n_pd, n_a);
  }
  return Success;
}

int cmd_snr_curve(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.combiner != "mrc" && o.combiner != "egc" && o.combiner != "both")
    throw ConfigError("--combiner", "expected mrc, egc or both");
  if (o.points < 2) throw ConfigError("--points", "must be >= 2");
  const DesignConfig c = load(o, err);
  const auto [n_pd, n_a] = single_configuration(c);
  const DesignSpace space = to_design_space(c);
  const DesignProblem p(space.context(n_pd, n_a), to_constraints(c), to_scheme(c));

  double d = 0.0;
  if (o.d_um) {
    d = *o.d_um * 1e-6;
  } else {
    const auto s = solve(p);
    d = s.feasible ? s.pd_side : p.d_max();
  }
  const std::uint64_t samples = o.mc_samples.value_or(kCurveSamples);
  const McSpec mc{samples, o.seed.value_or(1)};
  if (samples > 0) mc.validate();
  err << "N_PD = " << n_pd << ", N_a = " << n_a << ", d = " << csv_number(d * 1e6) << " um\n";

  std::vector<Combiner> combiners;
  if (o.combiner != "egc") combiners.push_back(Combiner::Mrc);
  if (o.combiner != "mrc") combiners.push_back(Combiner::Egc);

  std::vector<std::string> header{"combiner", "L_um", "analytic_snr_db"};
  if (samples > 0) {
    header.emplace_back("mc_snr_db");
    header.emplace_back("mc_stderr_db");
  }
  out << csv_row(header);
  const auto& ctx = p.context();
  for (const Combiner comb : combiners) {
    for (const double l : linspace(0.0, ctx.spot.back_focal, o.points)) {
      std::vector<std::string> row{to_string(comb), um(l),
                                   csv_number(to_db(avg_snr(ctx.snr, d, p.spot_radius(l), comb)))};
      if (samples > 0) {
        const auto est = mc_average_snr(ctx, d, l, comb, mc);
        row.push_back(csv_number(to_db(est.mean)));
        row.push_back(csv_number(10.0 / std::log(10.0) * est.std_error / est.mean));
      }
      out << csv_row(row);
    }
  }
  return Success;
}

int cmd_feasible(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.grid_d < 2 || o.grid_l < 2) throw ConfigError("--grid", "needs at least 2 x 2 nodes");
  const DesignConfig c = load(o, err);
  const auto [n_pd, n_a] = single_configuration(c);
  const DesignSpace space = to_design_space(c);
  const DesignProblem p(space.context(n_pd, n_a), to_constraints(c), to_scheme(c));
  if (p.d_min() > p.d_max()) {
    err << "empty PD-side range: d_min " << csv_number(p.d_min() * 1e6) << " um > d_max "
        << csv_number(p.d_max() * 1e6) << " um\n";
    return Infeasible;
  }
  const auto region = feasible_region(p, linspace(p.d_min(), p.d_max(), o.grid_d),
                                      linspace(0.0, p.context().spot.back_focal, o.grid_l));
  out << csv_row({"d_um", "L_um", "problem_id", "satisfies_all"});
  std::size_t count = 0;
  for (std::size_t i = 0; i < region.d.size(); ++i)
    for (std::size_t j = 0; j < region.distance.size(); ++j) {
      const auto& cell = region.at(i, j);
      count += cell.satisfies_all;
      out << csv_row({um(region.d[i]), um(region.distance[j]),
                      std::to_string(static_cast<int>(cell.regime)),
                      cell.satisfies_all ? "true" : "false"});
    }
  err << count << " of " << region.cells.size() << " cells satisfy every constraint\n";
  return Success;
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  AcceptanceOptions a;
  if (o.config) a.space = to_design_space(load(o, err));
  if (o.seed) a.seed = *o.seed;
  if (o.mc_samples) a.mc_samples = *o.mc_samples;
  const auto results = run_acceptance(a);
  const auto cal = calibration_diagnostic(a.space, DesignConstraints{});
  bool ok = true;
  for (const auto& r : results) ok = ok && r.passed;

  if (o.json) {
    nlohmann::json j;
    j["passed"] = ok;
    j["checks"] = nlohmann::json::array();
    for (const auto& r : results)
      j["checks"].push_back(
          {{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    j["calibration"] = {{"d_delta_m", cal.d_delta}, {"ratio", cal.ratio}};
    out << j.dump(2) << '\n';
  } else {
    for (const auto& r : results)
      out << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ' ' << r.name << ": " << r.detail
          << '\n';
    out << "[INFO] d_delta(49, 64) = " << csv_number(cal.d_delta * 1e6) << " um ("
        << csv_number(cal.ratio) << " x 44.81 um)\n";
  }
  return ok ? Success : CheckFailure;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Imaging receiver design for optical wireless links", "imgrx"};
  app.require_subcommand(1);

  Options o;
  std::string out_path;
  std::string grid;
  const auto common = [&](CLI::App* cmd) {
    cmd->add_option("--config", o.config, "Sectioned configuration file")->check(CLI::ExistingFile);
    cmd->add_option("--out", out_path, "Write output here instead of standard output");
    cmd->add_option("--seed", o.seed, "Seed for randomized computations");
    cmd->add_flag("--json", o.json, "Machine-readable output");
  };
  const auto single = [&](CLI::App* cmd) {
    cmd->add_option("--n-pd", o.n_pd, "Override the PD count");
    cmd->add_option("--n-a", o.n_a, "Override the lens count");
  };

  auto* design = app.add_subcommand("design", "Solve for the rate-optimal design");
  common(design);
  single(design);
  design->add_flag("--summary", o.summary, "Human-readable summary instead of JSON");

  auto* sweep = app.add_subcommand("sweep", "Optimal designs across a FOV range (CSV)");
  common(sweep);
  single(sweep);
  sweep->add_option("--fov-min", o.fov_min, "First FOV requirement (deg)");
  sweep->add_option("--fov-max", o.fov_max, "Last FOV requirement (deg)");
  sweep->add_option("--fov-step", o.fov_step, "FOV increment (deg)");
  sweep->add_flag("--best-only", o.best_only, "Only the best configuration per FOV");

  auto* curve = app.add_subcommand("snr-curve", "Analytic and Monte-Carlo SNR versus L (CSV)");
  common(curve);
  single(curve);
  curve->add_option("--combiner", o.combiner, "mrc, egc or both");
  curve->add_option("--mc-samples", o.mc_samples, "Monte-Carlo samples per point, 0 to skip");
  curve->add_option("--d-um", o.d_um, "PD side (um); default is the optimized side");
  curve->add_option("--points", o.points, "Number of L values");

  auto* feasible = app.add_subcommand("feasible", "Feasible-region grid dump (CSV)");
  common(feasible);
  single(feasible);
  feasible->add_option("--grid", grid, "Grid size NxM over (d, L)");

  auto* validate = app.add_subcommand("validate", "Run the acceptance battery");
  common(validate);
  validate->add_option("--mc-samples", o.mc_samples, "Monte-Carlo samples per configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? Success : ConfigFailure;
  }

  try {
    if (!grid.empty()) {
      const auto x = grid.find('x');
      if (x == std::string::npos) throw ConfigError("--grid", "expected NxM");
      const auto parse = [&](std::string_view s, int& v) {
        const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
        if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
          throw ConfigError("--grid", "expected NxM");
      };
      parse(std::string_view(grid).substr(0, x), o.grid_d);
      parse(std::string_view(grid).substr(x + 1), o.grid_l);
    }

    std::ofstream file;
    if (!out_path.empty()) {
      file.open(out_path);
      if (!file) throw ConfigError("--out", "cannot open " + out_path);
    }
    std::ostream& dest = out_path.empty() ? out : file;
    if (*design) return cmd_design(o, dest, err);
    if (*sweep) return cmd_sweep(o, dest, err);
    if (*curve) return cmd_snr_curve(o, dest, err);
    if (*feasible) return cmd_feasible(o, dest, err);
    return cmd_validate(o, dest, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return ConfigFailure;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << '\n';
    return ConfigFailure;
  } catch (const nlohmann::json::exception& e) {
    err << "invalid input: " << e.what() << '\n';
    return ConfigFailure;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return CheckFailure;
  }
}

}  // namespace imgrx::cli
