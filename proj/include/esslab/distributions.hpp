#pragma once

#include <string>
#include <string_view>

#include "esslab/rng.hpp"

namespace esslab {

enum class Family {
  exponential,  // G(x) = e^-x on (0, inf)
  normal,       // standard normal
  uniform,      // on (0, 1)
  weibull,      // G(x) = e^-(x^alpha) on (0, inf)
  pareto,       // G(x) = x^-alpha on (1, inf)
  cauchy,       // standard Cauchy
  lognormal,    // exp of a standard normal
  logistic,     // G(x) = 1 / (1 + e^x)
  expexp,       // G(x) = e^-(e^x) on (-inf, inf)
};

// Static tail catalog: EF = log-concave survival (exponential or faster),
// SE = subexponential (slower than exponential).
enum class TailClass { EF, SE, unclassified };

// A continuous law in one of the standard normalizations above, optionally
// mirrored about zero ("symmetrized": a random sign times a base draw whose
// support lies in (0, inf)).  Values are immutable and freely shareable.
class DistributionSpec {
 public:
  static DistributionSpec exponential();
  static DistributionSpec normal();
  static DistributionSpec uniform();
  static DistributionSpec weibull(double alpha);
  static DistributionSpec pareto(double alpha);
  static DistributionSpec cauchy();
  static DistributionSpec lognormal();
  static DistributionSpec logistic();
  static DistributionSpec expexp();

  Family family() const { return family_; }
  // Shape parameter; only meaningful for weibull and pareto.
  double shape() const { return shape_; }
  bool symmetrized() const { return symmetrized_; }

  double support_lo() const;
  double support_hi() const;
  TailClass tail_class() const;
  // True when F(-x) = 1 - F(x), or the uniform's midpoint variant of it.
  bool is_symmetric() const;

  // CDF is continuous and strictly increasing on the interior of the
  // support; outside it clamps to 0 or 1.
  double cdf(double x) const;
  // Exactly 1 - cdf(x).
  double survival(double x) const { return 1.0 - cdf(x); }
  // Exact inverse of the CDF; requires p in (0,1).
  double quantile(double p) const;
  // -log survival(x); rejects x where survival vanishes.
  double cumulative_hazard(double x) const;

  // Inverse-transform sampling: consumes exactly one uniform variate, so all
  // families share one code path and one stream layout.
  double sample(RngStream& rng) const { return quantile(rng.next_unit()); }

  // Mirror about zero.  Rejects families that are already two-sided.
  DistributionSpec symmetrize() const;

  // Canonical grammar string; parse_distribution(name()) round-trips.
  std::string name() const;

  bool operator==(const DistributionSpec&) const = default;

 private:
  DistributionSpec(Family f, double shape, bool sym)
      : family_(f), shape_(shape), symmetrized_(sym) {}

  double base_cdf(double x) const;
  double base_quantile(double p) const;

  Family family_;
  double shape_;
  bool symmetrized_;
};

// Grammar: exp | normal | uniform | weibull:<alpha> | pareto:<alpha> |
// cauchy | lognormal | logistic | expexp | sym(<base>).
// Throws std::invalid_argument naming the offending token.
DistributionSpec parse_distribution(std::string_view text);

// High-accuracy standard normal helpers (rational approximation plus one
// Halley refinement; absolute error well below 1e-12).
double standard_normal_cdf(double x);
double standard_normal_quantile(double p);

}  // namespace esslab
