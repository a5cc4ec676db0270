#include "imgrx/oracle.hpp"

#include <cmath>
#include <functional>

#include "imgrx/constants.hpp"
#include "imgrx/errors.hpp"
#include "parallel.hpp"

namespace imgrx {

namespace {

constexpr std::size_t kMcChunk = 4096;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  v.back() = b;
  return v;
}

struct Moments {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    n += 1.0;
    const double delta = x - mean;
    mean += delta / n;
    m2 += delta * (x - mean);
  }

  void merge(const Moments& o) {
    if (o.n == 0.0) return;
    const double total = n + o.n;
    const double delta = o.mean - mean;
    mean += delta * o.n / total;
    m2 += o.m2 + delta * delta * n * o.n / total;
    n = total;
  }
};

// Chunks are merged pairwise in index order so the result is schedule independent.
Moments merge_range(const std::vector<Moments>& parts, std::size_t b, std::size_t e) {
  if (e - b == 1) return parts[b];
  const std::size_t mid = b + (e - b) / 2;
  Moments left = merge_range(parts, b, mid);
  left.merge(merge_range(parts, mid, e));
  return left;
}

McEstimate sample_mean(const McSpec& mc, const std::function<double(double, double)>& f) {
  mc.validate();
  const std::size_t n = mc.samples;
  const std::size_t chunks = (n + kMcChunk - 1) / kMcChunk;
  std::vector<Moments> parts(chunks);
  detail::for_chunks(n, kMcChunk, [&](std::size_t b, std::size_t e, std::size_t c) {
    Moments m;
    for (std::size_t k = b; k < e; ++k)
      m.add(f(counter_uniform(mc.seed, 2 * k), counter_uniform(mc.seed, 2 * k + 1)));
    parts[c] = m;
  });
  const Moments all = merge_range(parts, 0, chunks);
  McEstimate out;
  out.mean = all.mean;
  out.samples = n;
  out.std_error = n > 1 ? std::sqrt(all.m2 / (all.n - 1.0) / all.n) : 0.0;
  return out;
}

}  // namespace

void GridSpec::validate() const {
  if (d_steps < 50 || distance_steps < 50) throw DomainError("grid needs at least 50 steps per axis");
}

void McSpec::validate() const {
  if (samples < 10000) throw DomainError("Monte Carlo needs at least 1e4 samples");
}

double counter_uniform(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t bits = splitmix64(splitmix64(seed) ^ index);
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

GridResult grid_search(const DesignProblem& problem, const GridSpec& grid, PredicateMode mode) {
  grid.validate();
  GridResult out;
  if (!problem.fov_feasible() || problem.d_min() > problem.d_max()) return out;
  const double l_top = std::min(problem.context().spot.back_focal, problem.l_max());
  out.d_nodes = linspace(problem.d_min(), problem.d_max(), grid.d_steps);
  out.distance_nodes = linspace(0.0, l_top, grid.distance_steps);
  out.d_step = (problem.d_max() - problem.d_min()) / (grid.d_steps - 1);
  out.distance_step = l_top / (grid.distance_steps - 1);
  const std::size_t nd = out.d_nodes.size();
  const std::size_t nl = out.distance_nodes.size();
  out.feasible.assign(nd * nl, 0);

  struct Best {
    bool found = false;
    double rate = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
  };
  // Higher rate wins; near-equal rates (1e-12) prefer larger L, then smaller d.
  const auto better = [](double rate, std::size_t j, const Best& b) {
    if (!b.found) return true;
    if (rate > b.rate * (1.0 + 1e-12)) return true;
    if (rate < b.rate * (1.0 - 1e-12)) return false;
    return j > b.j;
  };

  constexpr std::size_t rows_per_chunk = 4;
  std::vector<Best> parts((nd + rows_per_chunk - 1) / rows_per_chunk);
  detail::for_chunks(nd, rows_per_chunk, [&](std::size_t b, std::size_t e, std::size_t c) {
    Best best;
    for (std::size_t i = b; i < e; ++i) {
      const double d = out.d_nodes[i];
      for (std::size_t j = 0; j < nl; ++j) {
        const double l = out.distance_nodes[j];
        const bool ok = mode == PredicateMode::AlwaysTrue || problem.satisfies(d, l);
        if (!ok) continue;
        out.feasible[i * nl + j] = 1;
        const double rate = problem.rate(d, l);
        if (better(rate, j, best)) best = {true, rate, i, j};
      }
    }
    parts[c] = best;
  });

  Best best;
  for (const auto& p : parts)
    if (p.found && better(p.rate, p.j, best)) best = p;
  if (best.found) {
    out.found = true;
    out.d = out.d_nodes[best.i];
    out.distance = out.distance_nodes[best.j];
    out.rate = best.rate;
  }
  return out;
}

McEstimate mc_sum_ai_squared(const InnerArray& array, double spot_radius, const McSpec& mc) {
  array.validate();
  if (!(spot_radius > 0.0)) throw DomainError("beam radius must be > 0");
  const double half = 0.5 * array.side;
  return sample_mean(mc, [&](double u, double v) {
    const BeamFootprint f{{(2.0 * u - 1.0) * half, (2.0 * v - 1.0) * half}, spot_radius};
    return overlap_moments(array, f).sum_sq;
  });
}

McEstimate mc_average_snr(const DesignContext& context, double d, double distance,
                          Combiner combiner, const McSpec& mc) {
  context.validate();
  const auto& ctx = context.snr;
  const InnerArray array = ctx.inner(d);
  array.validate();
  const double w = context.spot.radius(distance);
  const double sigma2 = ctx.noise_variance(d);
  // Per-PD current is R xi P A_i / (pi W^2); the combiner only needs sum A_i and sum A_i^2.
  const double k = ctx.signal_current() / (constants::pi * w * w);
  const double scale = ctx.outer_factor() * k * k / sigma2;
  const double n = ctx.pd_count;
  const double half = 0.5 * array.side;
  return sample_mean(mc, [&](double u, double v) {
    const BeamFootprint f{{(2.0 * u - 1.0) * half, (2.0 * v - 1.0) * half}, w};
    const auto m = overlap_moments(array, f);
    return combiner == Combiner::Mrc ? scale * m.sum_sq : scale * m.sum * m.sum / n;
  });
}

}  // namespace imgrx
