#include "imgrx/array_geometry.hpp"

#include <algorithm>
#include <cmath>

#include "imgrx/constants.hpp"
#include "imgrx/errors.hpp"

namespace imgrx {

namespace {

int checked_root(long long n, const char* what) {
  if (!is_perfect_square(n)) throw GeometryError(what);
  return static_cast<int>(std::llround(std::sqrt(static_cast<double>(n))));
}

// Antiderivative of sqrt(r^2 - x^2) - h.
double segment_integral(double x, double h, double r) {
  const double t = std::clamp(x / r, -1.0, 1.0);
  return 0.5 * (std::sqrt(std::max(0.0, 1.0 - t * t)) * x * r + r * r * std::asin(t) - 2.0 * h * x);
}

// Disc at the origin intersected with x0 <= x <= x1, y >= h, for h >= 0.
double strip_area(double x0, double x1, double h, double r) {
  if (h >= r) return 0.0;
  const double s = std::sqrt(r * r - h * h);
  const double a = std::clamp(x0, -s, s);
  const double b = std::clamp(x1, -s, s);
  return segment_integral(b, h, r) - segment_integral(a, h, r);
}

double box_area(double x0, double x1, double y0, double y1, double r) {
  if (y1 <= 0.0) return box_area(x0, x1, -y1, -y0, r);
  if (y0 < 0.0) return box_area(x0, x1, 0.0, -y0, r) + box_area(x0, x1, 0.0, y1, r);
  return strip_area(x0, x1, y0, r) - strip_area(x0, x1, y1, r);
}

}  // namespace

bool is_perfect_square(long long n) {
  if (n < 1) return false;
  const auto root = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(n))));
  for (long long k = std::max(1LL, root - 1); k <= root + 1; ++k)
    if (k * k == n) return true;
  return false;
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::SmallSpot:
      return "small-spot";
    case Regime::Intermediate:
      return "intermediate";
    case Regime::LargeSpot:
      return "large-spot";
  }
  return "unknown";
}

int InnerArray::per_row() const { return checked_root(pd_count, "PD count must be a perfect square"); }

double InnerArray::pitch() const { return side / per_row(); }

void InnerArray::validate() const {
  const int m = per_row();
  if (!(std::isfinite(side) && side > 0.0)) throw GeometryError("array side must be > 0");
  if (!(std::isfinite(pd_side) && pd_side > 0.0)) throw GeometryError("PD side must be > 0");
  if (pd_side * m > side * (1.0 + 1e-12)) throw GeometryError("PDs do not fit in the array");
}

int OuterArray::per_row() const {
  return checked_root(count, "lensed-array count must be a perfect square");
}

double OuterArray::lens_radius() const { return side / (2.0 * per_row()); }

void OuterArray::validate() const {
  per_row();
  if (!(std::isfinite(side) && side > 0.0)) throw GeometryError("receiver side must be > 0");
}

double fill_factor(int pd_count, double pd_side, double array_side) {
  InnerArray a{pd_count, array_side, pd_side};
  a.validate();
  const double ff = pd_count * pd_side * pd_side / (array_side * array_side);
  if (ff > 1.0 + 1e-12) throw GeometryError("fill factor above 1");
  return std::min(ff, 1.0);
}

double fill_factor(const InnerArray& array) {
  return fill_factor(array.pd_count, array.pd_side, array.side);
}

double max_pd_side(int pd_count, double array_side, double ff_target) {
  checked_root(pd_count, "PD count must be a perfect square");
  if (!(ff_target > 0.0 && ff_target <= 1.0)) throw DomainError("fill factor must be in (0, 1]");
  if (!(std::isfinite(array_side) && array_side > 0.0)) throw GeometryError("array side must be > 0");
  return array_side * std::sqrt(ff_target / pd_count);
}

std::vector<Point2> pd_centers(const InnerArray& array) {
  const int m = array.per_row();
  const double p = array.side / m;
  std::vector<Point2> out;
  out.reserve(static_cast<std::size_t>(m) * m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i)
      out.push_back({-0.5 * array.side + p * (i + 0.5), -0.5 * array.side + p * (j + 0.5)});
  return out;
}

double disc_rectangle_overlap(Point2 center, double radius, double x0, double x1, double y0,
                              double y1) {
  if (!(radius > 0.0)) return 0.0;
  if (x0 > x1) std::swap(x0, x1);
  if (y0 > y1) std::swap(y0, y1);
  x0 -= center.x;
  x1 -= center.x;
  y0 -= center.y;
  y1 -= center.y;
  if (x1 <= -radius || x0 >= radius || y1 <= -radius || y0 >= radius) return 0.0;
  const double area = box_area(x0, x1, y0, y1, radius);
  const double cap = std::min(constants::pi * radius * radius, (x1 - x0) * (y1 - y0));
  return std::clamp(area, 0.0, cap);
}

double disc_square_overlap(const BeamFootprint& footprint, Point2 square_center, double side) {
  const double h = 0.5 * side;
  return disc_rectangle_overlap(footprint.center, footprint.radius, square_center.x - h,
                                square_center.x + h, square_center.y - h, square_center.y + h);
}

std::vector<double> overlap_areas(const InnerArray& array, const BeamFootprint& footprint) {
  array.validate();
  const auto centers = pd_centers(array);
  std::vector<double> out(centers.size());
  std::transform(centers.begin(), centers.end(), out.begin(), [&](Point2 c) {
    return disc_square_overlap(footprint, c, array.pd_side);
  });
  return out;
}

std::vector<double> per_pd_power(const InnerArray& array, const BeamFootprint& footprint,
                                 double lens_power, double efficiency) {
  if (!(footprint.radius > 0.0)) throw DomainError("beam radius must be > 0");
  auto areas = overlap_areas(array, footprint);
  const double scale =
      efficiency * lens_power / (constants::pi * footprint.radius * footprint.radius);
  for (double& a : areas) a *= scale;
  return areas;
}

OverlapMoments overlap_moments(const InnerArray& array, const BeamFootprint& footprint) {
  const int m = array.per_row();
  const double p = array.side / m;
  const double h = 0.5 * array.pd_side;
  const double r = footprint.radius;
  const double r2 = r * r;
  const double full = array.pd_side * array.pd_side;
  const double origin = -0.5 * array.side;
  const auto index_range = [&](double c) {
    const int lo = static_cast<int>(std::floor((c - r - h - origin) / p - 0.5));
    const int hi = static_cast<int>(std::ceil((c + r + h - origin) / p - 0.5));
    return std::pair{std::max(0, lo), std::min(m - 1, hi)};
  };
  const auto [i0, i1] = index_range(footprint.center.x);
  const auto [j0, j1] = index_range(footprint.center.y);

  OverlapMoments out;
  for (int j = j0; j <= j1; ++j) {
    const double cy = origin + p * (j + 0.5) - footprint.center.y;
    const double fy = std::max(std::abs(cy - h), std::abs(cy + h));
    for (int i = i0; i <= i1; ++i) {
      const double cx = origin + p * (i + 0.5) - footprint.center.x;
      const double fx = std::max(std::abs(cx - h), std::abs(cx + h));
      double a;
      if (fx * fx + fy * fy <= r2)
        a = full;  // far corner inside the disc
      else
        a = disc_rectangle_overlap({0.0, 0.0}, r, cx - h, cx + h, cy - h, cy + h);
      out.sum += a;
      out.sum_sq += a * a;
    }
  }
  return out;
}

Regime regime_of(double pd_side, double array_side, double spot_radius) {
  if (!(pd_side > 0.0 && pd_side <= array_side)) throw DomainError("regime needs 0 < d <= D");
  if (spot_radius <= pd_side / constants::sqrt_pi) return Regime::SmallSpot;
  if (spot_radius <= array_side / constants::sqrt_pi) return Regime::Intermediate;
  return Regime::LargeSpot;
}

std::optional<int> hit_pd(const InnerArray& array, Point2 center) {
  const int m = array.per_row();
  const double p = array.side / m;
  const double h = 0.5 * array.pd_side;
  const auto cell = [&](double v) {
    return static_cast<int>(std::floor((v + 0.5 * array.side) / p));
  };
  const int i = cell(center.x);
  const int j = cell(center.y);
  if (i < 0 || j < 0 || i >= m || j >= m) return std::nullopt;
  const double cx = -0.5 * array.side + p * (i + 0.5);
  const double cy = -0.5 * array.side + p * (j + 0.5);
  if (std::abs(center.x - cx) > h || std::abs(center.y - cy) > h) return std::nullopt;
  return j * m + i;
}

}  // namespace imgrx
