#pragma once

#include <optional>
#include <vector>

namespace imgrx {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// N_PD photodetectors of side d centred in the cells of a square lattice of side D.
struct InnerArray {
  int pd_count = 1;
  double side = 400e-6;  // D
  double pd_side = 0.0;  // d

  int per_row() const;
  double pitch() const;
  void validate() const;
};

// N_a lensed inner arrays tiling a square receiver of side D_a.
struct OuterArray {
  int count = 1;
  double side = 2e-2;  // D_a

  int per_row() const;
  double lens_radius() const;  // r_lns = D_a / (2 sqrt(N_a))
  void validate() const;
};

struct BeamFootprint {
  Point2 center;
  double radius = 0.0;  // W2
};

enum class Regime { SmallSpot = 1, Intermediate = 2, LargeSpot = 3 };

const char* to_string(Regime r);

bool is_perfect_square(long long n);

double fill_factor(int pd_count, double pd_side, double array_side);
double fill_factor(const InnerArray& array);

double max_pd_side(int pd_count, double array_side, double ff_target);

std::vector<Point2> pd_centers(const InnerArray& array);

// Exact area of a disc intersected with an axis-aligned rectangle.
double disc_rectangle_overlap(Point2 center, double radius, double x0, double x1, double y0,
                              double y1);

double disc_square_overlap(const BeamFootprint& footprint, Point2 square_center, double side);

// Overlap area with every PD, in pd_centers order.
std::vector<double> overlap_areas(const InnerArray& array, const BeamFootprint& footprint);

// P_i = xi P_lens A_i / (pi W2^2).
std::vector<double> per_pd_power(const InnerArray& array, const BeamFootprint& footprint,
                                 double lens_power, double efficiency);

// Sum of A_i^2 and sum of A_i, visiting only PDs near the footprint.
struct OverlapMoments {
  double sum = 0.0;
  double sum_sq = 0.0;
};
OverlapMoments overlap_moments(const InnerArray& array, const BeamFootprint& footprint);

// Boundaries belong to the lower-W2 regime.
Regime regime_of(double pd_side, double array_side, double spot_radius);

// Index of the PD containing the footprint centre, if any.
std::optional<int> hit_pd(const InnerArray& array, Point2 center);

}  // namespace imgrx
