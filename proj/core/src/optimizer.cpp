#include "imgrx/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "imgrx/constants.hpp"
#include "imgrx/errors.hpp"
#include "parallel.hpp"

namespace imgrx {

namespace {

constexpr double kRel = 1e-9;

double x3() {
  static const double v = extremum_constant(3);
  return v;
}

double x5() {
  static const double v = extremum_constant(5);
  return v;
}

struct Candidate {
  double d;
  double lo;
  double hi;
  Regime regime;
  std::string id;
};

DesignSolution blank(const DesignProblem& p) {
  DesignSolution s;
  s.pd_count = p.context().snr.pd_count;
  s.outer_count = p.context().snr.outer.count;
  return s;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Explains an empty candidate set with the first constraint that rules it out.
DesignSolution infeasible(const DesignProblem& p) {
  DesignSolution s = blank(p);
  if (!p.fov_feasible()) {
    s.failed = FailedConstraint::FieldOfView;
    s.diagnostic = "field of view: " + fmt(p.constraints().fov_req_deg) +
                   " deg exceeds the model maximum of " + fmt(max_fov_deg(p.context().fov)) +
                   " deg";
    return s;
  }
  if (p.d_min() > p.d_max() * (1.0 + kRel)) {
    s.failed = FailedConstraint::SideBounds;
    s.diagnostic = "PD side: d_min " + fmt(p.d_min() * 1e6) + " um exceeds d_max " +
                   fmt(p.d_max() * 1e6) + " um";
    return s;
  }
  s.failed = FailedConstraint::Snr;
  s.diagnostic = "SNR: best attainable " + fmt(p.snr(p.d_max(), p.l_max())) + " at (d_max, L_max)" +
                 " is below the required " + fmt(p.snr_required());
  return s;
}

bool within_regime(const DesignProblem& p, double d, double distance, Regime r) {
  const double w = p.spot_radius(distance);
  const double small = d / constants::sqrt_pi;
  const double large = p.context().snr.array_side / constants::sqrt_pi;
  switch (r) {
    case Regime::SmallSpot:
      return w <= small * (1.0 + kRel);
    case Regime::Intermediate:
      return w >= small * (1.0 - kRel) && w <= large * (1.0 + kRel);
    case Regime::LargeSpot:
      return w >= large * (1.0 - kRel);
  }
  return false;
}

double snap(const DesignProblem& p, double d) {
  if (d < p.d_min() && d >= p.d_min() * (1.0 - kRel)) return p.d_min();
  if (d > p.d_max() && d <= p.d_max() * (1.0 + kRel)) return p.d_max();
  return d;
}

// Re-checks a candidate against the global predicates and fills in the objective.
std::optional<DesignSolution> finalize(const DesignProblem& p, Candidate c) {
  c.d = snap(p, c.d);
  c.hi = std::min(c.hi, p.l_max());
  c.lo = std::clamp(c.lo, 0.0, c.hi);
  if (!std::isfinite(c.d) || c.d < p.d_min() || c.d > p.d_max()) return std::nullopt;
  const double mid = 0.5 * (c.lo + c.hi);
  if (!p.satisfies(c.d, c.lo) || !p.satisfies(c.d, mid) || !p.satisfies(c.d, c.hi))
    return std::nullopt;
  DesignSolution s = blank(p);
  s.feasible = true;
  s.pd_side = c.d;
  s.distance_lo = c.lo;
  s.distance_hi = c.hi;
  s.regime = c.regime;
  s.case_id = std::move(c.id);
  s.rate = p.rate(c.d, c.hi);
  s.snr = p.snr(c.d, c.hi);
  return s;
}

DesignSolution pick(const DesignProblem& p, std::vector<Candidate> candidates) {
  std::optional<DesignSolution> best;
  for (auto& c : candidates) {
    auto s = finalize(p, std::move(c));
    if (s && (!best || better_solution(*s, *best))) best = std::move(s);
  }
  return best ? *best : infeasible(p);
}

bool preconditions_hold(const DesignProblem& p) {
  return p.fov_feasible() && p.d_min() <= p.d_max() * (1.0 + kRel);
}

}  // namespace

const char* to_string(FailedConstraint f) {
  switch (f) {
    case FailedConstraint::None:
      return "none";
    case FailedConstraint::FieldOfView:
      return "fov";
    case FailedConstraint::SideBounds:
      return "pd-side";
    case FailedConstraint::Snr:
      return "snr";
  }
  return "unknown";
}

void DesignConstraints::validate() const {
  if (!(std::isfinite(fov_req_deg) && fov_req_deg > 0.0))
    throw DomainError("required FOV must be > 0");
  if (!(ber > 0.0 && ber < 0.5)) throw DomainError("BER target must be in (0, 0.5)");
  if (!(std::isfinite(d_min) && d_min > 0.0)) throw DomainError("d_min must be > 0");
  if (!(ff_target > 0.0 && ff_target <= 1.0)) throw DomainError("fill factor must be in (0, 1]");
  if (snr_required_override && !(*snr_required_override >= 0.0))
    throw DomainError("required SNR override must be >= 0");
}

void DesignContext::validate() const {
  snr.validate();
  spot.validate();
  imgrx::validate(fov);
  const double fb = std::visit([](const auto& m) { return m.back_focal; }, fov);
  if (std::abs(fb - spot.back_focal) > 1e-12 * spot.back_focal)
    throw DomainError("FOV model and beam-spot model disagree on f_b");
}

double CriticalSides::d_delta() const { return std::cbrt(ax * snr_required); }

double CriticalSides::d_lambda(double distance) const {
  const double w = spot.radius(distance);
  return std::pow(constants::pi * w * w * ax * snr_required, 0.2);
}

double CriticalSides::d_g(double distance) const {
  const double w2 = std::pow(spot.radius(distance), 2);
  return std::pow(constants::pi * constants::pi * w2 * w2 * ax * snr_required /
                      (array_side * array_side),
                  0.2);
}

double CriticalSides::d_star() const { return std::cbrt(x3() * gap * ax); }

double CriticalSides::d_star2(double distance) const {
  const double w = spot.radius(distance);
  return std::pow(x5() * constants::pi * w * w * gap * ax, 0.2);
}

double CriticalSides::d_star3(double distance) const {
  const double w2 = std::pow(spot.radius(distance), 2);
  return std::pow(x5() * constants::pi * constants::pi * w2 * w2 * gap * ax /
                      (array_side * array_side),
                  0.2);
}

DesignProblem::DesignProblem(DesignContext context, DesignConstraints constraints, Scheme scheme)
    : context_(std::move(context)), constraints_(constraints), scheme_(scheme) {
  context_.validate();
  constraints_.validate();
  if (const auto* ofdm = std::get_if<DcoOfdm>(&scheme_)) {
    ofdm->validate();
    gap_ = snr_gap(constraints_.ber);
  }
  snr_required_ = constraints_.snr_required_override
                      ? *constraints_.snr_required_override
                      : imgrx::snr_required(scheme_, constraints_.ber);
  d_max_ = max_pd_side(context_.snr.pd_count, context_.snr.array_side, constraints_.ff_target);
  ax_ = ax_constant(context_.snr);
  transit_ = transit_constant(context_.snr.pd);
  try {
    l_max_ = max_distance_for_fov(context_.fov, constraints_.fov_req_deg);
    fov_feasible_ = true;
  } catch (const InfeasibleFovError&) {
    l_max_ = std::numeric_limits<double>::quiet_NaN();
  }
}

CriticalSides DesignProblem::sides() const {
  return {ax_, snr_required_, gap_, context_.snr.array_side, d_max_, context_.spot};
}

CriticalSides critical_sides(const DesignProblem& problem) { return problem.sides(); }

double DesignProblem::spot_radius(double distance) const {
  return context_.spot.radius(distance);
}

double DesignProblem::defocus(double x, double* raw) const {
  const auto& s = context_.spot;
  if (raw) *raw = s.back_focal - (x / constants::sqrt_pi - s.b0) / s.b1;
  return defocus_for_spot(s, x).distance;
}

Regime DesignProblem::regime(double d, double distance) const {
  return regime_of(d, context_.snr.array_side, spot_radius(distance));
}

double DesignProblem::snr(double d, double distance) const {
  return avg_mrc_snr_reduced(ax_, context_.snr.array_side, d, spot_radius(distance));
}

double DesignProblem::rate(double d, double distance) const {
  const double b = 1.0 / (transit_ * d);
  if (std::holds_alternative<Ook>(scheme_)) return rate_ook(b);
  return rate_ofdm(b, snr(d, distance), std::get<DcoOfdm>(scheme_), constraints_.ber);
}

bool DesignProblem::satisfies(double d, double distance) const {
  if (!fov_feasible_) return false;
  if (!(distance >= 0.0 && distance <= l_max_ + kRel * context_.spot.back_focal)) return false;
  if (!(d >= d_min() * (1.0 - kRel) && d <= d_max_ * (1.0 + kRel))) return false;
  const double dd = std::min(d, context_.snr.array_side);
  return snr(dd, std::min(distance, l_max_)) >= snr_required_ * (1.0 - kRel);
}

std::optional<double> DesignProblem::min_distance(double d) const {
  if (!fov_feasible_) return std::nullopt;
  const double need = ax_ * snr_required_;
  if (d * d * d < need * (1.0 - kRel)) return std::nullopt;
  const double d5 = std::pow(d, 5);
  const double D = context_.snr.array_side;
  double x = std::sqrt(d5 / need);
  if (x > D) x = std::pow(D * D * d5 / need, 0.25);
  const double l = defocus(x);
  if (l > l_max_ * (1.0 + kRel)) return std::nullopt;
  return std::min(l, l_max_);
}

int first_problem_row(double d_star, double lo, double d_max) {
  if (d_star <= lo) return 1;
  if (d_star < d_max) return 2;
  return 3;
}

DesignSolution solve_ook(const DesignProblem& p) {
  if (!std::holds_alternative<Ook>(p.scheme())) throw DomainError("solve_ook needs the OOK scheme");
  if (!preconditions_hold(p)) return infeasible(p);
  const auto s = p.sides();
  const double lm = p.l_max();
  const double D = p.context().snr.array_side;
  const double sq_w = constants::sqrt_pi * p.spot_radius(lm);

  std::vector<Candidate> raw;
  const double d1 = std::max({p.d_min(), s.d_delta(), sq_w});
  raw.push_back({d1, p.defocus(d1), lm, Regime::SmallSpot, "ook.p1"});

  const double l2 = std::min(p.defocus(s.d_delta()), lm);
  const double d2 = std::max(p.d_min(), s.d_lambda(l2));
  if (within_regime(p, d2, l2, Regime::Intermediate))
    raw.push_back({d2, l2, l2, Regime::Intermediate, "ook.p2"});

  const double l3 = std::min(p.defocus(D), lm);
  const double d3 = std::max(p.d_min(), s.d_g(l3));
  if (within_regime(p, d3, l3, Regime::LargeSpot))
    raw.push_back({d3, l3, l3, Regime::LargeSpot, "ook.p3"});

  // The rate does not depend on L, so report every L that keeps the SNR constraint.
  std::vector<Candidate> candidates;
  for (auto& c : raw) {
    const double d = snap(p, c.d);
    if (d > p.d_max()) continue;
    if (const auto lo = p.min_distance(d)) {
      c.d = d;
      c.lo = *lo;
      c.hi = lm;
      candidates.push_back(std::move(c));
    }
  }
  return pick(p, std::move(candidates));
}

DesignSolution solve_ofdm(const DesignProblem& p) {
  if (!std::holds_alternative<DcoOfdm>(p.scheme()))
    throw DomainError("solve_ofdm needs the DCO-OFDM scheme");
  if (!preconditions_hold(p)) return infeasible(p);
  const auto s = p.sides();
  const double lm = p.l_max();
  const double D = p.context().snr.array_side;
  const double d_min = p.d_min();
  const double d_max = p.d_max();
  const double sq_w = constants::sqrt_pi * p.spot_radius(lm);

  std::vector<Candidate> candidates;

  const double lo1 = std::max({s.d_delta(), d_min, sq_w});
  if (lo1 <= d_max * (1.0 + kRel)) {
    const int row = first_problem_row(s.d_star(), lo1, d_max);
    const double d = row == 1 ? lo1 : row == 2 ? s.d_star() : d_max;
    candidates.push_back(
        {d, p.defocus(d), lm, Regime::SmallSpot, "ofdm.p1.row" + std::to_string(row)});
  }

  const double gamma_ax = p.ax() * p.snr_required();
  const std::pair<double, double> corners[] = {
      {d_max, lm},
      {d_min, p.defocus(d_min)},
      {D, p.defocus(D)},
      {s.d_lambda(lm), lm},
      {d_min, p.defocus(std::sqrt(std::pow(d_min, 5) / gamma_ax))},
      {s.d_star(), p.defocus(s.d_star())},
      {sq_w, lm},
      {s.d_delta(), p.defocus(s.d_delta())},
      {s.d_star2(lm), lm},
      {d_min, lm},
      {d_max, p.defocus(d_max)},
  };
  for (std::size_t k = 0; k < std::size(corners); ++k) {
    const auto [d, l] = corners[k];
    if (!std::isfinite(d) || !std::isfinite(l) || l > lm * (1.0 + kRel)) continue;
    const double ds = snap(p, d);
    if (ds < d_min || ds > d_max) continue;
    if (!within_regime(p, ds, std::min(l, lm), Regime::Intermediate)) continue;
    candidates.push_back({ds, l, l, Regime::Intermediate, "ofdm.p2.c" + std::to_string(k + 1)});
  }

  const double l3 = std::min(p.defocus(D), lm);
  if (within_regime(p, d_min, l3, Regime::LargeSpot)) {
    const double lo3 = std::max(d_min, s.d_g(l3));
    if (lo3 <= d_max * (1.0 + kRel)) {
      const int row = first_problem_row(s.d_star3(l3), lo3, d_max);
      const double d = row == 1 ? lo3 : row == 2 ? s.d_star3(l3) : d_max;
      candidates.push_back({d, l3, l3, Regime::LargeSpot, "ofdm.p3.row" + std::to_string(row)});
    }
  }
  return pick(p, std::move(candidates));
}

DesignSolution solve(const DesignProblem& problem) {
  return std::holds_alternative<Ook>(problem.scheme()) ? solve_ook(problem) : solve_ofdm(problem);
}

bool better_solution(const DesignSolution& a, const DesignSolution& b) {
  if (a.feasible != b.feasible) return a.feasible;
  if (!a.feasible) return false;
  if (a.rate > b.rate * (1.0 + kRel)) return true;
  if (b.rate > a.rate * (1.0 + kRel)) return false;
  constexpr double dist_tol = 1e-12;
  if (a.distance_hi > b.distance_hi + dist_tol) return true;
  if (b.distance_hi > a.distance_hi + dist_tol) return false;
  if (a.pd_count != b.pd_count) return a.pd_count < b.pd_count;
  if (a.outer_count != b.outer_count) return a.outer_count < b.outer_count;
  return a.distance_lo < b.distance_lo - dist_tol;
}

void DesignSpace::validate() const {
  pd.validate_material();
  tia.validate();
  lens.validate();
  spot.validate();
  imgrx::validate(fov);
  if (!(array_side > 0.0)) throw GeometryError("array side must be > 0");
  if (!(receiver_side > 0.0)) throw GeometryError("receiver side must be > 0");
  if (pd_counts.empty() || outer_counts.empty())
    throw DomainError("enumeration sets must not be empty");
  for (int n : pd_counts)
    if (!is_perfect_square(n)) throw GeometryError("PD counts must be perfect squares");
  for (int n : outer_counts)
    if (!is_perfect_square(n)) throw GeometryError("lensed-array counts must be perfect squares");
  if (link.reference_outer_count != 0 && !is_perfect_square(link.reference_outer_count))
    throw GeometryError("reference lensed-array count must be a perfect square");
  if (link.lens_power_override && !(*link.lens_power_override > 0.0))
    throw DomainError("collected-power override must be > 0");
  if (!(link.transmit_power >= 0.0 && link.beam_radius_rx > 0.0))
    throw DomainError("link budget needs P_t >= 0 and W_rx > 0");
}

double DesignSpace::lens_power(int outer_count) const {
  const double r = OuterArray{outer_count, receiver_side}.lens_radius();
  if (link.lens_power_override) {
    const int ref = link.reference_outer_count != 0
                        ? link.reference_outer_count
                        : *std::max_element(outer_counts.begin(), outer_counts.end());
    const double r_ref = OuterArray{ref, receiver_side}.lens_radius();
    return *link.lens_power_override * (r / r_ref) * (r / r_ref);
  }
  return lens_received_power(link.transmit_power, link.beam_radius_rx, r);
}

DesignContext DesignSpace::context(int pd_count, int outer_count) const {
  DesignContext c;
  c.snr.pd = pd;
  c.snr.tia = tia;
  c.snr.array_side = array_side;
  c.snr.pd_count = pd_count;
  c.snr.outer = OuterArray{outer_count, receiver_side};
  c.snr.efficiency = optical_efficiency(lens, c.snr.outer.lens_radius(), spot.eta);
  c.snr.lens_power = lens_power(outer_count);
  c.snr.gain = gain;
  c.spot = spot;
  c.fov = fov;
  return c;
}

GlobalSolution solve_global(const DesignSpace& space, const DesignConstraints& constraints,
                            const Scheme& scheme) {
  space.validate();
  GlobalSolution out;
  for (int n_pd : space.pd_counts)
    for (int n_a : space.outer_counts)
      out.configurations.push_back(
          solve(DesignProblem(space.context(n_pd, n_a), constraints, scheme)));

  const DesignSolution* best = nullptr;
  for (const auto& s : out.configurations)
    if (s.feasible && (!best || better_solution(s, *best))) best = &s;
  if (best) {
    out.best = *best;
    return out;
  }
  out.best.failed = out.configurations.front().failed;
  for (const auto& s : out.configurations)
    if (s.failed != out.best.failed) out.best.failed = FailedConstraint::Snr;
  out.best.diagnostic = "no feasible configuration among " +
                        std::to_string(out.configurations.size()) +
                        "; first failing constraint: " + to_string(out.best.failed);
  if (out.best.failed == FailedConstraint::FieldOfView)
    out.best.diagnostic = out.configurations.front().diagnostic;
  return out;
}

FeasibleRegion feasible_region(const DesignProblem& problem, std::vector<double> d_grid,
                               std::vector<double> distance_grid) {
  const auto increasing = [](const std::vector<double>& v) {
    return !v.empty() && std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
  };
  if (!increasing(d_grid) || !increasing(distance_grid))
    throw DomainError("grids must be non-empty and strictly increasing");
  const double fb = problem.context().spot.back_focal;
  if (d_grid.front() < problem.d_min() * (1.0 - kRel) ||
      d_grid.back() > problem.d_max() * (1.0 + kRel))
    throw DomainError("d grid must lie within [d_min, d_max]");
  if (distance_grid.front() < 0.0 || distance_grid.back() > fb * (1.0 + kRel))
    throw DomainError("L grid must lie within [0, f_b]");
  distance_grid.back() = std::min(distance_grid.back(), fb);

  FeasibleRegion out;
  out.d = std::move(d_grid);
  out.distance = std::move(distance_grid);
  out.cells.resize(out.d.size() * out.distance.size());
  const std::size_t nl = out.distance.size();
  detail::for_chunks(out.d.size(), 8, [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t i = b; i < e; ++i) {
      const double d = std::min(out.d[i], problem.context().snr.array_side);
      for (std::size_t j = 0; j < nl; ++j) {
        auto& cell = out.cells[i * nl + j];
        const double l = out.distance[j];
        cell.regime = problem.regime(d, l);
        cell.snr = problem.snr(d, l);
        cell.rate = problem.rate(d, l);
        cell.satisfies_all = problem.satisfies(d, l);
      }
    }
  });
  return out;
}

}  // namespace imgrx
