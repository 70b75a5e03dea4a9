// Growth/limit signature across tail classes.  Monte Carlo heavy; trial
// counts are sized so every check clears its band at the fixed seeds.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <string>

#include "esslab/experiments.hpp"

using namespace esslab;

namespace {

SummaryStats mu_at(const DistributionSpec& spec, int n, long trials, std::uint64_t seed) {
  TrialPlan plan{spec, n, trials, seed};
  return estimate_mu(plan, 0);
}

long trials_for(int n) {
  if (n <= 100) return 3000;
  if (n <= 1000) return 800;
  return 150;
}

}  // namespace

TEST_CASE("light tails grow, heavy tails settle near one half") {
  std::map<std::string, SummaryStats> mu_1000;

  for (auto spec : {DistributionSpec::uniform(), DistributionSpec::normal(),
                    DistributionSpec::exponential()}) {
    CAPTURE(spec.name());
    double prev = -1.0;
    for (int n : {100, 1000, 10000}) {
      auto mu = mu_at(spec, n, trials_for(n), 777000 + n);
      MESSAGE(spec.name(), " n=", n, " mu=", mu.mean, " se=", mu.std_error);
      CHECK(mu.mean > prev);
      prev = mu.mean;
      if (n == 1000) mu_1000[spec.name()] = mu;
    }
  }

  for (auto spec : {DistributionSpec::cauchy(), DistributionSpec::pareto(1.0),
                    DistributionSpec::weibull(0.5).symmetrize()}) {
    CAPTURE(spec.name());
    auto mu_large = mu_at(spec, 10000, trials_for(10000), 778000);
    MESSAGE(spec.name(), " n=10000 mu=", mu_large.mean, " se=", mu_large.std_error);
    CHECK(mu_large.mean >= 0.35);
    CHECK(mu_large.mean <= 0.65);
    mu_1000[spec.name()] = mu_at(spec, 1000, 600, 779000);
  }

  // universal logarithmic ceiling at n = 1000 (loose constant)
  const double ceiling = 3.0 * std::log(1000.0);
  for (const auto& [name, mu] : mu_1000) {
    CAPTURE(name);
    CHECK(mu.mean <= ceiling);
  }

  // the exponential law is the slowest-growing light tail
  const auto& exp_mu = mu_1000.at("exp");
  const auto& uni_mu = mu_1000.at("uniform");
  const double se = 4.0 * std::sqrt(exp_mu.std_error * exp_mu.std_error +
                                    uni_mu.std_error * uni_mu.std_error);
  CHECK(exp_mu.mean <= uni_mu.mean + se);
}

TEST_CASE("cross-estimator identity at n = 1000") {
  for (auto spec : {DistributionSpec::uniform(), DistributionSpec::cauchy()}) {
    CAPTURE(spec.name());
    auto mu = mu_at(spec, 1000, 800, 780000);
    TrialPlan hull_plan{spec, 1000, 4000, 781000};
    auto hull = hull_experiment(hull_plan, 0);
    const double se = std::sqrt(4.0 * mu.std_error * mu.std_error +
                                hull.e_v0.std_error * hull.e_v0.std_error);
    MESSAGE(spec.name(), " 2mu=", 2.0 * mu.mean, " E(V0)=", hull.e_v0.mean);
    CHECK(std::abs(2.0 * mu.mean - hull.e_v0.mean) <= 4.0 * se);
  }
}
