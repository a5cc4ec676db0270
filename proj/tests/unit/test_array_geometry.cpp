#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include <doctest.h>

#include "imgrx/array_geometry.hpp"
#include "imgrx/constants.hpp"
#include "imgrx/errors.hpp"

using namespace imgrx;
using doctest::Approx;

namespace {

// Midpoint rule over x of the clipped chord length.
double overlap_by_quadrature(Point2 c, double r, double x0, double x1, double y0, double y1) {
  const double a = std::max(x0, c.x - r);
  const double b = std::min(x1, c.x + r);
  if (a >= b) return 0.0;
  constexpr int n = 200000;
  const double h = (b - a) / n;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double x = a + (k + 0.5) * h;
    const double half = std::sqrt(std::max(0.0, r * r - (x - c.x) * (x - c.x)));
    sum += std::max(0.0, std::min(y1, c.y + half) - std::max(y0, c.y - half));
  }
  return sum * h;
}

}  // namespace

TEST_CASE("perfect squares") {
  for (int k = 1; k <= 1000; ++k) CHECK(is_perfect_square(static_cast<long long>(k) * k));
  for (long long n : {0LL, -4LL, 2LL, 3LL, 5LL, 48LL, 50LL, 99LL}) CHECK_FALSE(is_perfect_square(n));
  CHECK(is_perfect_square(4000000000000LL));
}

TEST_CASE("fill factor and maximum PD side") {
  CHECK(fill_factor(49, 40e-6, 400e-6) == Approx(0.49));
  CHECK(max_pd_side(49, 400e-6, 0.64) == Approx(45.714285714e-6).epsilon(1e-9));
  CHECK(max_pd_side(36, 400e-6, 0.64) == Approx(53.333333333e-6).epsilon(1e-9));
  CHECK(fill_factor(49, max_pd_side(49, 400e-6, 0.64), 400e-6) == Approx(0.64));
  CHECK(fill_factor(4, 200e-6, 400e-6) == 1.0);
  CHECK_THROWS_AS(fill_factor(48, 10e-6, 400e-6), GeometryError);
  CHECK_THROWS_AS(fill_factor(4, 250e-6, 400e-6), GeometryError);
  CHECK_THROWS_AS(max_pd_side(49, 400e-6, 1.5), DomainError);
}

TEST_CASE("PD centres are row-major and centred in their cells") {
  const InnerArray a{9, 300e-6, 50e-6};
  const auto c = pd_centers(a);
  REQUIRE(c.size() == 9);
  CHECK(c[0].x == Approx(-100e-6));
  CHECK(c[0].y == Approx(-100e-6));
  CHECK(c[1].x == Approx(0.0));
  CHECK(c[1].y == Approx(-100e-6));
  CHECK(c[8].x == Approx(100e-6));
  CHECK(c[8].y == Approx(100e-6));
  CHECK(a.pitch() == Approx(100e-6));
}

TEST_CASE("disc-rectangle overlap special cases") {
  const double r = 1.0;
  CHECK(disc_rectangle_overlap({0, 0}, r, -2, 2, -2, 2) == Approx(constants::pi));
  CHECK(disc_rectangle_overlap({0, 0}, r, 0, 2, 0, 2) == Approx(constants::pi / 4));
  CHECK(disc_rectangle_overlap({0, 0}, r, 0, 2, -2, 2) == Approx(constants::pi / 2));
  CHECK(disc_rectangle_overlap({0, 0}, r, -0.1, 0.1, -0.1, 0.1) == Approx(0.04));
  CHECK(disc_rectangle_overlap({5, 5}, r, -1, 1, -1, 1) == 0.0);
  CHECK(disc_rectangle_overlap({0, 0}, 0.0, -1, 1, -1, 1) == 0.0);
  // Corners swapped.
  CHECK(disc_rectangle_overlap({0, 0}, r, 2, 0, 2, 0) == Approx(constants::pi / 4));
}

TEST_CASE("disc-rectangle overlap matches quadrature") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> radius(0.05, 2.0);
  for (int k = 0; k < 40; ++k) {
    const Point2 c{u(rng), u(rng)};
    const double r = radius(rng);
    double x0 = u(rng), x1 = u(rng), y0 = u(rng), y1 = u(rng);
    if (x0 > x1) std::swap(x0, x1);
    if (y0 > y1) std::swap(y0, y1);
    const double exact = disc_rectangle_overlap(c, r, x0, x1, y0, y1);
    CHECK(exact == Approx(overlap_by_quadrature(c, r, x0, x1, y0, y1)).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("overlap areas tile the disc inside a fully packed array") {
  const InnerArray a{16, 400e-6, 100e-6};  // FF = 1
  const BeamFootprint f{{13e-6, -21e-6}, 120e-6};
  const auto areas = overlap_areas(a, f);
  CHECK(std::accumulate(areas.begin(), areas.end(), 0.0) ==
        Approx(constants::pi * f.radius * f.radius).epsilon(1e-12));

  const BeamFootprint cover{{0, 0}, 1e-3};
  for (double x : overlap_areas(a, cover)) CHECK(x == Approx(a.pd_side * a.pd_side));
}

TEST_CASE("overlap moments agree with the full overlap list") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-300e-6, 300e-6);
  std::uniform_real_distribution<double> w(5e-6, 400e-6);
  for (int k = 0; k < 200; ++k) {
    const InnerArray a{64, 400e-6, 40e-6};
    const BeamFootprint f{{u(rng), u(rng)}, w(rng)};
    const auto areas = overlap_areas(a, f);
    const auto m = overlap_moments(a, f);
    double s = 0.0, s2 = 0.0;
    for (double x : areas) {
      s += x;
      s2 += x * x;
    }
    CHECK(m.sum == Approx(s).epsilon(1e-12).scale(1e-12));
    CHECK(m.sum_sq == Approx(s2).epsilon(1e-12).scale(1e-24));
  }
}

TEST_CASE("per-PD power scales overlap by the spot intensity") {
  const InnerArray a{4, 400e-6, 100e-6};
  const BeamFootprint f{{-100e-6, -100e-6}, 10e-6};  // inside PD 0
  const auto p = per_pd_power(a, f, 3e-6, 0.18);
  CHECK(p[0] == Approx(3e-6 * 0.18));
  CHECK(p[1] == 0.0);
  CHECK_THROWS_AS(per_pd_power(a, {{0, 0}, 0.0}, 1.0, 1.0), DomainError);
}

TEST_CASE("regime boundaries belong to the smaller-spot regime") {
  const double d = 40e-6, D = 400e-6;
  CHECK(regime_of(d, D, d / constants::sqrt_pi) == Regime::SmallSpot);
  CHECK(regime_of(d, D, std::nextafter(d / constants::sqrt_pi, 1.0)) == Regime::Intermediate);
  CHECK(regime_of(d, D, D / constants::sqrt_pi) == Regime::Intermediate);
  CHECK(regime_of(d, D, std::nextafter(D / constants::sqrt_pi, 1.0)) == Regime::LargeSpot);
  CHECK(std::string(to_string(Regime::Intermediate)) == "intermediate");
  CHECK_THROWS_AS(regime_of(500e-6, D, 1e-6), DomainError);
}

TEST_CASE("hit detection") {
  const InnerArray a{4, 400e-6, 100e-6};
  CHECK(hit_pd(a, {-100e-6, -100e-6}) == 0);
  CHECK(hit_pd(a, {100e-6, -100e-6}) == 1);
  CHECK(hit_pd(a, {100e-6, 100e-6}) == 3);
  CHECK_FALSE(hit_pd(a, {0.0, 0.0}).has_value());  // gap between PDs
  CHECK_FALSE(hit_pd(a, {300e-6, 0.0}).has_value());
}

TEST_CASE("outer array") {
  const OuterArray o{64, 2e-2};
  CHECK(o.per_row() == 8);
  CHECK(o.lens_radius() == Approx(1.25e-3));
  CHECK_THROWS_AS((OuterArray{50, 2e-2}.validate()), GeometryError);
}
