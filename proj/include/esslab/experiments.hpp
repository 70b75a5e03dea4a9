#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "esslab/distributions.hpp"
#include "esslab/rng.hpp"

namespace esslab {

// One Monte Carlo experiment description.  Each trial t draws from the
// substream derived from (master_seed, t), so results are bit-identical for
// any worker count: every aggregate below is accumulated in integers.
struct TrialPlan {
  DistributionSpec spec;
  int n = 2;
  long trials = 1;
  std::uint64_t master_seed = 0;
  int max_support = 2;  // census depth for ESS plans, in [1, 3]
};

struct SummaryStats {
  long count = 0;
  double mean = 0.0;
  double std_error = 0.0;  // sample sd / sqrt(count)
  double ci_lo = 0.0;      // 95% normal interval
  double ci_hi = 0.0;
};

SummaryStats summarize_sum(long count, double sum, double sum_sq);
SummaryStats summarize_hits(long count, long hits);

struct PoissonFit {
  double lambda = 0.0;
  double l1_distance = 0.0;  // sum_k |p_k - pois_k|, Poisson tail included
  std::map<int, double> empirical_pmf;
};
PoissonFit poisson_fit(const std::map<int, double>& empirical_pmf, double lambda);

// Chen-Stein pieces for S2 = sum of per-pair indicators: m = n(n-1)/2 pairs,
// each with neighborhood size 2n-3 (pairs sharing an index, self included):
//   lambda = m p_gamma, b1 = m (2n-3) p_gamma^2, b2 = m (2n-4) p_joint,
//   bound = 2 (b1 + b2) (1 - e^-lambda) / lambda  (0 when lambda = 0).
struct ChenSteinReport {
  double lambda = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double bound = 0.0;
  double empirical_l1 = 0.0;
};
ChenSteinReport chen_stein_report(int n, double p_gamma, double p_joint,
                                  const std::map<int, double>& empirical_pmf);

struct CensusExperimentResult {
  long trials = 0;
  int n = 0;
  int max_support = 2;
  SummaryStats mean_s1, mean_s2, mean_s3;
  SummaryStats p_pure, p_two_point, p_le2;
  std::map<int, double> pmf_s1, pmf_s2, pmf_s3;
  // Mean number of ordered pairs of two-point ESS sharing exactly one index;
  // estimates the b2 moment sum directly from census records.
  double adjacent_pair_rate = 0.0;
};

// Census of every trial game at the plan's max_support.  The per-pair check
// runs in O(n) worst case with constant expected cost, so full-matrix scans
// stay practical into the thousands.
CensusExperimentResult census_experiment(const TrialPlan& plan, int threads = 0);

// Mean S2 over trials (the mu_n estimator).
SummaryStats estimate_mu(const TrialPlan& plan, int threads = 0);

struct ExistenceResult {
  SummaryStats p_pure;       // P(S1 > 0)
  SummaryStats p_two_point;  // P(S2 > 0)
  SummaryStats p_le2;        // P(S1 + S2 > 0)
};
ExistenceResult existence_experiment(const TrialPlan& plan, int threads = 0);

// Direct O(n)-per-trial estimators that draw only the columns the event
// reads: two for the base event, three (sharing the first column) for the
// joint event.
SummaryStats estimate_gamma_prob(const TrialPlan& plan, int threads = 0);
SummaryStats estimate_joint_gamma(const TrialPlan& plan, int threads = 0);

struct HullExperimentResult {
  long trials = 0;
  SummaryStats e_v;        // E(V)
  SummaryStats e_v0;       // E(V0)
  SummaryStats p_v0_zero;  // P(V0 = 0)
  SummaryStats p_v_eq_4;   // P(V = 4)
};
HullExperimentResult hull_experiment(const TrialPlan& plan, int threads = 0);

struct S1DistributionResult {
  SummaryStats mean;
  std::map<int, double> empirical_pmf;
  double l1_distance = 0.0;  // vs exact Binomial(n, 1/n)
  double chi_square = 0.0;
  long chi_df = 0;
  double p_value = 1.0;
};
S1DistributionResult s1_distribution(const TrialPlan& plan, int threads = 0);

struct FuCurveResult {
  std::vector<double> grid;
  std::vector<double> cdf;       // empirical P(U <= u) on the grid
  double fu_one_minus = 0.0;     // empirical P(U < 1)
  double lemma5_check = 0.0;     // (n-2) Int (1-u)^(n-3) F_U(u) du, trapezoid
  int check_n = 0;
  long pairs = 0;
};

// Draws point pairs (4 stream values each), evaluates U per pair, and returns
// the empirical CDF on the grid plus the integral identity evaluated at
// check_n for comparison against estimate_gamma_prob.  Advances rng by
// 4 * pairs.  Requires pairs >= 1000 and check_n >= 3.
FuCurveResult fu_curve(const DistributionSpec& spec, long pairs,
                       std::vector<double> grid, int check_n, RngStream& rng,
                       int quad_points = 256, int threads = 0);

// Worker count: requested if positive, otherwise hardware concurrency.
int resolve_threads(int requested);

}  // namespace esslab
