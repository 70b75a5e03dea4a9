#pragma once

#include <vector>

#include "esslab/distributions.hpp"
#include "esslab/rng.hpp"

namespace esslab {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct PointSample {
  std::vector<Point> points;
  int size() const { return static_cast<int>(points.size()); }
};

// 2n draws from one stream, x then y per point.  Requires n >= 2.
PointSample sample_points(int n, const DistributionSpec& spec, RngStream& rng);

struct HullStats {
  std::vector<int> hull;  // counterclockwise cycle of vertex indices
  int V = 0;              // number of hull vertices
  int V0 = -1;            // positive-normal edge count; -1 until counted
};

// Monotone-chain hull; collinear mid-edge points and exact duplicates are
// dropped, so the cycle is in strictly convex position.  All points equal
// degenerates to a single vertex.
HullStats convex_hull(const PointSample& sample);

// Counts CCW edges whose direction has dx < 0 and dy > 0, i.e. whose outward
// normal is strictly positive in both components.
int count_positive_normal_edges(const HullStats& stats, const PointSample& sample);

// Convenience: hull with V0 filled in.
HullStats hull_statistics(const PointSample& sample);

// Coefficients of the line A x + B y = C through two distinct points:
// A = y1 - y2, B = x2 - x1, C = x2 y1 - x1 y2.
struct LineCoeffs {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
};

LineCoeffs line_through_pair(const Point& p1, const Point& p2);

// The event that points 0 and 1 satisfy x0 < x1, y0 > y1 and every other
// point lies strictly below the line through them.
bool gamma_indicator(const PointSample& sample);

// Conditional probability that a fresh point lands strictly above the line
// through p1 and p2, computed as
//     integral_0^1 survival((C - B q(s)) / A) ds
// by fixed-order Gauss-Legendre quadrature; returns 1 when the quadrant
// condition x1 < x2, y1 > y2 fails.  For the polynomial-tailed families
// (cauchy, pareto) the last 1/quad_points of the integral is replaced by the
// uniform bound survival <= 1.  Requires quad_points >= 8.
double u_statistic(const Point& p1, const Point& p2, const DistributionSpec& spec,
                   int quad_points = 256);

namespace detail {
// Gauss-Legendre nodes and weights on [-1, 1]; cached per order, thread-safe.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const QuadratureRule& gauss_legendre(int order);
}  // namespace detail

}  // namespace esslab
