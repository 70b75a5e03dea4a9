#include "esslab/hull_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace esslab {

PointSample sample_points(int n, const DistributionSpec& spec, RngStream& rng) {
  if (n < 2) throw std::invalid_argument("sample_points requires n >= 2");
  PointSample s;
  s.points.resize(n);
  for (int i = 0; i < n; ++i) {
    s.points[i].x = spec.sample(rng);
    s.points[i].y = spec.sample(rng);
  }
  return s;
}

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

HullStats convex_hull(const PointSample& sample) {
  const auto& pts = sample.points;
  const int n = sample.size();
  if (n < 1) throw std::invalid_argument("convex_hull requires at least one point");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (pts[a].x != pts[b].x) return pts[a].x < pts[b].x;
    return pts[a].y < pts[b].y;
  });
  order.erase(std::unique(order.begin(), order.end(),
                          [&](int a, int b) {
                            return pts[a].x == pts[b].x && pts[a].y == pts[b].y;
                          }),
              order.end());

  HullStats stats;
  if (order.size() == 1) {
    stats.hull = {order[0]};
    stats.V = 1;
    return stats;
  }

  // Lower then upper chain; popping on cross <= 0 keeps only strict turns.
  std::vector<int> hull;
  hull.reserve(order.size() + 1);
  for (int idx : order) {
    while (hull.size() >= 2 &&
           cross(pts[hull[hull.size() - 2]], pts[hull.back()], pts[idx]) <= 0.0) {
      hull.pop_back();
    }
    hull.push_back(idx);
  }
  const size_t lower = hull.size() + 1;
  for (auto it = order.rbegin() + 1; it != order.rend(); ++it) {
    while (hull.size() >= lower &&
           cross(pts[hull[hull.size() - 2]], pts[hull.back()], pts[*it]) <= 0.0) {
      hull.pop_back();
    }
    hull.push_back(*it);
  }
  hull.pop_back();  // closing vertex repeats the first

  stats.hull = std::move(hull);
  stats.V = static_cast<int>(stats.hull.size());
  return stats;
}

int count_positive_normal_edges(const HullStats& stats, const PointSample& sample) {
  if (stats.V < 2) return 0;
  int count = 0;
  for (int t = 0; t < stats.V; ++t) {
    const Point& a = sample.points[stats.hull[t]];
    const Point& b = sample.points[stats.hull[(t + 1) % stats.V]];
    if (b.x - a.x < 0.0 && b.y - a.y > 0.0) ++count;
  }
  return count;
}

HullStats hull_statistics(const PointSample& sample) {
  HullStats stats = convex_hull(sample);
  stats.V0 = count_positive_normal_edges(stats, sample);
  return stats;
}

LineCoeffs line_through_pair(const Point& p1, const Point& p2) {
  if (p1.x == p2.x && p1.y == p2.y) {
    throw std::invalid_argument("line_through_pair requires distinct points");
  }
  return {p1.y - p2.y, p2.x - p1.x, p2.x * p1.y - p1.x * p2.y};
}

bool gamma_indicator(const PointSample& sample) {
  if (sample.size() < 2) throw std::invalid_argument("gamma_indicator requires n >= 2");
  const Point& p1 = sample.points[0];
  const Point& p2 = sample.points[1];
  if (!(p1.x < p2.x && p1.y > p2.y)) return false;
  const LineCoeffs line = line_through_pair(p1, p2);
  for (int k = 2; k < sample.size(); ++k) {
    const Point& p = sample.points[k];
    if (!(line.A * p.x + line.B * p.y < line.C)) return false;
  }
  return true;
}

namespace detail {

const QuadratureRule& gauss_legendre(int order) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;

  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[order];
  if (!slot) {
    auto rule = std::make_unique<QuadratureRule>();
    rule->nodes.resize(order);
    rule->weights.resize(order);
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
      // Newton iteration on P_order from the Chebyshev-angle initial guess.
      double z = std::cos(M_PI * (i + 0.75) / (order + 0.5));
      double deriv = 0.0;
      for (int it = 0; it < 64; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int k = 0; k < order; ++k) {
          double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * k + 1.0) * z * p1 - k * p2) / (k + 1.0);
        }
        deriv = order * (z * p0 - p1) / (z * z - 1.0);
        double step = p0 / deriv;
        z -= step;
        if (std::abs(step) < 1e-15) break;
      }
      rule->nodes[i] = -z;
      rule->nodes[order - 1 - i] = z;
      rule->weights[i] = rule->weights[order - 1 - i] =
          2.0 / ((1.0 - z * z) * deriv * deriv);
    }
    slot = std::move(rule);
  }
  return *slot;
}

}  // namespace detail

double u_statistic(const Point& p1, const Point& p2, const DistributionSpec& spec,
                   int quad_points) {
  if (quad_points < 8) throw std::invalid_argument("u_statistic requires quad_points >= 8");
  if (!(p1.x < p2.x && p1.y > p2.y)) return 1.0;

  const LineCoeffs line = line_through_pair(p1, p2);  // A > 0, B > 0 here
  const bool heavy = spec.family() == Family::cauchy || spec.family() == Family::pareto;
  const double upper = heavy ? 1.0 - 1.0 / quad_points : 1.0;

  const auto& rule = detail::gauss_legendre(quad_points);
  double u = 0.0;
  for (int i = 0; i < quad_points; ++i) {
    const double s = 0.5 * upper * (rule.nodes[i] + 1.0);
    const double w = 0.5 * upper * rule.weights[i];
    u += w * spec.survival((line.C - line.B * spec.quantile(s)) / line.A);
  }
  if (heavy) u += 1.0 / quad_points;  // tail strip, survival bounded by 1
  return std::min(u, 1.0);
}

}  // namespace esslab
