#include "esslab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "esslab/census_scan.hpp"
#include "esslab/counter_game.hpp"
#include "esslab/hull_geometry.hpp"

namespace esslab {

namespace {

constexpr double kZ95 = 1.959963984540054;

void validate_plan(const TrialPlan& plan, int min_n) {
  if (plan.n < min_n) throw std::invalid_argument("plan.n too small for this experiment");
  if (plan.trials < 1) throw std::invalid_argument("plan.trials must be >= 1");
  if (plan.max_support < 1 || plan.max_support > 3) {
    throw std::invalid_argument("plan.max_support must be in [1, 3]");
  }
}

// Dynamic trial scheduler with per-worker accumulators.  Accumulators hold
// only integer tallies (plus scratch), so the merged result is independent of
// the schedule and of the worker count.
template <class Acc, class Body>
Acc run_trials(long trials, int threads, Body&& body) {
  threads = static_cast<int>(std::min<long>(resolve_threads(threads), trials));
  if (threads <= 1) {
    Acc acc;
    for (long t = 0; t < trials; ++t) body(t, acc);
    return acc;
  }
  std::atomic<long> cursor{0};
  const long chunk = std::max(1L, trials / (static_cast<long>(threads) * 32));
  std::vector<Acc> parts(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (;;) {
        const long lo = cursor.fetch_add(chunk);
        if (lo >= trials) break;
        const long hi = std::min(trials, lo + chunk);
        for (long t = lo; t < hi; ++t) body(t, parts[w]);
      }
    });
  }
  for (auto& th : pool) th.join();
  Acc acc;
  for (auto& part : parts) acc.merge(part);
  return acc;
}

void merge_hist(std::map<int, long>& into, const std::map<int, long>& from) {
  for (const auto& [k, v] : from) into[k] += v;
}

std::map<int, double> normalize_hist(const std::map<int, long>& hist, long trials) {
  std::map<int, double> pmf;
  for (const auto& [k, v] : hist) pmf[k] = static_cast<double>(v) / trials;
  return pmf;
}

}  // namespace

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

SummaryStats summarize_sum(long count, double sum, double sum_sq) {
  SummaryStats s;
  s.count = count;
  if (count <= 0) return s;
  s.mean = sum / count;
  if (count > 1) {
    double var = (sum_sq - sum * sum / count) / (count - 1);
    s.std_error = std::sqrt(std::max(var, 0.0) / count);
  }
  s.ci_lo = s.mean - kZ95 * s.std_error;
  s.ci_hi = s.mean + kZ95 * s.std_error;
  return s;
}

SummaryStats summarize_hits(long count, long hits) {
  return summarize_sum(count, static_cast<double>(hits), static_cast<double>(hits));
}

PoissonFit poisson_fit(const std::map<int, double>& empirical_pmf, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("poisson_fit requires lambda >= 0");
  double total = 0.0;
  int kmax = -1;
  for (const auto& [k, p] : empirical_pmf) {
    if (k < 0 || p < 0.0) throw std::invalid_argument("pmf entries must be nonnegative");
    total += p;
    kmax = std::max(kmax, k);
  }
  if (!empirical_pmf.empty() && std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("pmf must be normalized to 1 within 1e-12");
  }

  double distance = 0.0;
  double pois = std::exp(-lambda);
  double cum = pois;
  for (int k = 0;; ++k) {
    auto it = empirical_pmf.find(k);
    distance += std::abs((it == empirical_pmf.end() ? 0.0 : it->second) - pois);
    if (k >= kmax && 1.0 - cum < 1e-12) break;
    pois *= lambda / (k + 1);
    cum += pois;
  }
  distance += std::max(0.0, 1.0 - cum);  // truncated Poisson tail
  return {lambda, distance, empirical_pmf};
}

ChenSteinReport chen_stein_report(int n, double p_gamma, double p_joint,
                                  const std::map<int, double>& empirical_pmf) {
  if (n < 2) throw std::invalid_argument("chen_stein_report requires n >= 2");
  if (!(p_gamma >= 0.0 && p_gamma <= 1.0 && p_joint >= 0.0 && p_joint <= 1.0)) {
    throw std::invalid_argument("probabilities must lie in [0, 1]");
  }
  ChenSteinReport r;
  const double m = 0.5 * static_cast<double>(n) * (n - 1);
  r.lambda = m * p_gamma;
  r.b1 = m * (2.0 * n - 3.0) * p_gamma * p_gamma;
  r.b2 = m * (2.0 * n - 4.0) * p_joint;
  r.bound = r.lambda > 0.0 ? 2.0 * (r.b1 + r.b2) * (-std::expm1(-r.lambda)) / r.lambda : 0.0;
  r.empirical_l1 =
      empirical_pmf.empty() ? 0.0 : poisson_fit(empirical_pmf, r.lambda).l1_distance;
  return r;
}

namespace {

struct CensusAcc {
  long trials = 0;
  unsigned long long s1_sum = 0, s1_sq = 0;
  unsigned long long s2_sum = 0, s2_sq = 0;
  unsigned long long s3_sum = 0, s3_sq = 0;
  long pure_pos = 0, two_pos = 0, le2_pos = 0;
  unsigned long long adjacent = 0;
  std::map<int, long> h1, h2, h3;
  std::vector<std::pair<int, int>> pair_buf;  // scratch

  void merge(const CensusAcc& o) {
    trials += o.trials;
    s1_sum += o.s1_sum; s1_sq += o.s1_sq;
    s2_sum += o.s2_sum; s2_sq += o.s2_sq;
    s3_sum += o.s3_sum; s3_sq += o.s3_sq;
    pure_pos += o.pure_pos; two_pos += o.two_pos; le2_pos += o.le2_pos;
    adjacent += o.adjacent;
    merge_hist(h1, o.h1); merge_hist(h2, o.h2); merge_hist(h3, o.h3);
  }
};

CensusAcc run_census_trials(const TrialPlan& plan, int threads) {
  return run_trials<CensusAcc>(plan.trials, threads, [&](long t, CensusAcc& acc) {
    const auto stream = RngStream::for_trial(plan.master_seed, static_cast<std::uint64_t>(t));
    CounterGame game(plan.n, plan.spec, stream.key());
    unsigned long long s1 = 0, s2 = 0, s3 = 0;
    acc.pair_buf.clear();
    detail::census_scan(
        game, plan.max_support, [&](int) { ++s1; },
        [&](int i, int j, double, double, double) {
          ++s2;
          acc.pair_buf.emplace_back(i, j);
        },
        [&](int, int, int, double, double, double, double) { ++s3; });

    ++acc.trials;
    acc.s1_sum += s1; acc.s1_sq += s1 * s1;
    acc.s2_sum += s2; acc.s2_sq += s2 * s2;
    acc.s3_sum += s3; acc.s3_sq += s3 * s3;
    if (s1 > 0) ++acc.pure_pos;
    if (s2 > 0) ++acc.two_pos;
    if (s1 + s2 > 0) ++acc.le2_pos;
    acc.h1[static_cast<int>(s1)]++;
    acc.h2[static_cast<int>(s2)]++;
    if (plan.max_support >= 3) acc.h3[static_cast<int>(s3)]++;

    for (size_t a = 0; a < acc.pair_buf.size(); ++a) {
      for (size_t b = 0; b < acc.pair_buf.size(); ++b) {
        if (a == b) continue;
        const auto& pa = acc.pair_buf[a];
        const auto& pb = acc.pair_buf[b];
        const int shared = (pa.first == pb.first) + (pa.first == pb.second) +
                           (pa.second == pb.first) + (pa.second == pb.second);
        if (shared == 1) ++acc.adjacent;
      }
    }
  });
}

}  // namespace

CensusExperimentResult census_experiment(const TrialPlan& plan, int threads) {
  validate_plan(plan, 1);
  const CensusAcc acc = run_census_trials(plan, threads);

  CensusExperimentResult r;
  r.trials = acc.trials;
  r.n = plan.n;
  r.max_support = plan.max_support;
  r.mean_s1 = summarize_sum(acc.trials, static_cast<double>(acc.s1_sum),
                            static_cast<double>(acc.s1_sq));
  r.mean_s2 = summarize_sum(acc.trials, static_cast<double>(acc.s2_sum),
                            static_cast<double>(acc.s2_sq));
  r.mean_s3 = summarize_sum(acc.trials, static_cast<double>(acc.s3_sum),
                            static_cast<double>(acc.s3_sq));
  r.p_pure = summarize_hits(acc.trials, acc.pure_pos);
  r.p_two_point = summarize_hits(acc.trials, acc.two_pos);
  r.p_le2 = summarize_hits(acc.trials, acc.le2_pos);
  r.pmf_s1 = normalize_hist(acc.h1, acc.trials);
  r.pmf_s2 = normalize_hist(acc.h2, acc.trials);
  r.pmf_s3 = normalize_hist(acc.h3, acc.trials);
  r.adjacent_pair_rate = static_cast<double>(acc.adjacent) / acc.trials;
  return r;
}

SummaryStats estimate_mu(const TrialPlan& plan, int threads) {
  TrialPlan p = plan;
  p.max_support = std::max(p.max_support, 2);
  return census_experiment(p, threads).mean_s2;
}

ExistenceResult existence_experiment(const TrialPlan& plan, int threads) {
  TrialPlan p = plan;
  p.max_support = std::max(p.max_support, 2);
  const auto r = census_experiment(p, threads);
  return {r.p_pure, r.p_two_point, r.p_le2};
}

namespace {

struct HitsAcc {
  long trials = 0;
  long hits = 0;
  void merge(const HitsAcc& o) {
    trials += o.trials;
    hits += o.hits;
  }
};

// The event that rows a, b of the column pair (x_base, y_base) satisfy
// X_a < X_b, Y_a > Y_b with every other row strictly below the line through
// the two points.  Reads entries lazily; the row loop exits on the first
// point at or above the line.
bool column_pair_event(const DistributionSpec& spec, const RngStream& s, int n,
                       std::uint64_t x_base, std::uint64_t y_base, int a, int b) {
  const double xa = spec.quantile(s.unit_at(x_base + a));
  const double xb = spec.quantile(s.unit_at(x_base + b));
  if (!(xa < xb)) return false;
  const double ya = spec.quantile(s.unit_at(y_base + a));
  const double yb = spec.quantile(s.unit_at(y_base + b));
  if (!(ya > yb)) return false;
  const double A = ya - yb;
  const double B = xb - xa;
  const double C = xb * ya - xa * yb;
  for (int k = 0; k < n; ++k) {
    if (k == a || k == b) continue;
    const double xk = spec.quantile(s.unit_at(x_base + k));
    const double yk = spec.quantile(s.unit_at(y_base + k));
    if (!(A * xk + B * yk < C)) return false;
  }
  return true;
}

}  // namespace

SummaryStats estimate_gamma_prob(const TrialPlan& plan, int threads) {
  validate_plan(plan, 2);
  const auto acc = run_trials<HitsAcc>(plan.trials, threads, [&](long t, HitsAcc& a) {
    const auto s = RngStream::for_trial(plan.master_seed, static_cast<std::uint64_t>(t));
    ++a.trials;
    if (column_pair_event(plan.spec, s, plan.n, 0, plan.n, 0, 1)) ++a.hits;
  });
  return summarize_hits(acc.trials, acc.hits);
}

SummaryStats estimate_joint_gamma(const TrialPlan& plan, int threads) {
  validate_plan(plan, 3);
  const std::uint64_t n = plan.n;
  const auto acc = run_trials<HitsAcc>(plan.trials, threads, [&](long t, HitsAcc& a) {
    const auto s = RngStream::for_trial(plan.master_seed, static_cast<std::uint64_t>(t));
    ++a.trials;
    // Columns X, Y, Z at offsets 0, n, 2n; the joint event shares column X.
    if (column_pair_event(plan.spec, s, plan.n, 0, n, 0, 1) &&
        column_pair_event(plan.spec, s, plan.n, 0, 2 * n, 0, 2)) {
      ++a.hits;
    }
  });
  return summarize_hits(acc.trials, acc.hits);
}

namespace {

struct HullAcc {
  long trials = 0;
  unsigned long long v_sum = 0, v_sq = 0;
  unsigned long long v0_sum = 0, v0_sq = 0;
  long v0_zero = 0, v_eq_4 = 0;
  PointSample scratch;

  void merge(const HullAcc& o) {
    trials += o.trials;
    v_sum += o.v_sum; v_sq += o.v_sq;
    v0_sum += o.v0_sum; v0_sq += o.v0_sq;
    v0_zero += o.v0_zero; v_eq_4 += o.v_eq_4;
  }
};

}  // namespace

HullExperimentResult hull_experiment(const TrialPlan& plan, int threads) {
  validate_plan(plan, 2);
  const auto acc = run_trials<HullAcc>(plan.trials, threads, [&](long t, HullAcc& a) {
    auto stream = RngStream::for_trial(plan.master_seed, static_cast<std::uint64_t>(t));
    a.scratch.points.resize(plan.n);
    for (int i = 0; i < plan.n; ++i) {
      a.scratch.points[i].x = plan.spec.sample(stream);
      a.scratch.points[i].y = plan.spec.sample(stream);
    }
    const HullStats stats = hull_statistics(a.scratch);
    const auto v = static_cast<unsigned long long>(stats.V);
    const auto v0 = static_cast<unsigned long long>(stats.V0);
    ++a.trials;
    a.v_sum += v; a.v_sq += v * v;
    a.v0_sum += v0; a.v0_sq += v0 * v0;
    if (stats.V0 == 0) ++a.v0_zero;
    if (stats.V == 4) ++a.v_eq_4;
  });

  HullExperimentResult r;
  r.trials = acc.trials;
  r.e_v = summarize_sum(acc.trials, static_cast<double>(acc.v_sum),
                        static_cast<double>(acc.v_sq));
  r.e_v0 = summarize_sum(acc.trials, static_cast<double>(acc.v0_sum),
                         static_cast<double>(acc.v0_sq));
  r.p_v0_zero = summarize_hits(acc.trials, acc.v0_zero);
  r.p_v_eq_4 = summarize_hits(acc.trials, acc.v_eq_4);
  return r;
}

S1DistributionResult s1_distribution(const TrialPlan& plan, int threads) {
  validate_plan(plan, 1);
  TrialPlan p = plan;
  p.max_support = 1;
  const CensusAcc acc = run_census_trials(p, threads);

  S1DistributionResult r;
  r.mean = summarize_sum(acc.trials, static_cast<double>(acc.s1_sum),
                         static_cast<double>(acc.s1_sq));
  r.empirical_pmf = normalize_hist(acc.h1, acc.trials);

  // Exact Binomial(n, 1/n) reference via the pmf ratio recurrence.
  const int n = plan.n;
  std::vector<double> reference(n + 1, 0.0);
  if (n == 1) {
    reference[1] = 1.0;
  } else {
    reference[0] = std::pow(1.0 - 1.0 / n, n);
    for (int k = 0; k < n; ++k) {
      reference[k + 1] = reference[k] * (n - k) / (static_cast<double>(k + 1) * (n - 1));
    }
  }
  for (int k = 0; k <= n; ++k) {
    auto it = r.empirical_pmf.find(k);
    r.l1_distance += std::abs((it == r.empirical_pmf.end() ? 0.0 : it->second) - reference[k]);
  }

  // Chi-square with tail bins pooled below an expected count of 5.
  const double trials = static_cast<double>(acc.trials);
  std::vector<long> observed(n + 1, 0);
  for (const auto& [k, c] : acc.h1) observed[k] = c;
  double stat = 0.0;
  long bins = 0;
  double pool_obs = 0.0, pool_exp = 0.0;
  for (int k = 0; k <= n; ++k) {
    pool_obs += observed[k];
    pool_exp += trials * reference[k];
    if (pool_exp >= 5.0 && (k == n || trials * reference[k + 1] >= 5.0)) {
      stat += (pool_obs - pool_exp) * (pool_obs - pool_exp) / pool_exp;
      ++bins;
      pool_obs = pool_exp = 0.0;
    }
  }
  if (pool_exp > 0.0) {
    stat += (pool_obs - pool_exp) * (pool_obs - pool_exp) / pool_exp;
    ++bins;
  }
  r.chi_square = stat;
  r.chi_df = std::max(bins - 1, 1L);
  if (bins < 2) {
    r.p_value = 1.0;  // degenerate reference (e.g. n = 1)
  } else {
    boost::math::chi_squared dist(static_cast<double>(r.chi_df));
    r.p_value = boost::math::cdf(boost::math::complement(dist, stat));
  }
  return r;
}

namespace {

struct FuAcc {
  long pairs = 0;
  long below_one = 0;
  std::vector<long> bins;
  void merge(const FuAcc& o) {
    pairs += o.pairs;
    below_one += o.below_one;
    if (bins.size() < o.bins.size()) bins.resize(o.bins.size(), 0);
    for (size_t i = 0; i < o.bins.size(); ++i) bins[i] += o.bins[i];
  }
};

}  // namespace

FuCurveResult fu_curve(const DistributionSpec& spec, long pairs,
                       std::vector<double> grid, int check_n, RngStream& rng,
                       int quad_points, int threads) {
  if (pairs < 1000) throw std::invalid_argument("fu_curve requires pairs >= 1000");
  if (check_n < 3) throw std::invalid_argument("fu_curve requires check_n >= 3");
  if (grid.empty() || !std::is_sorted(grid.begin(), grid.end()) ||
      grid.front() < 0.0 || grid.back() > 1.0) {
    throw std::invalid_argument("fu_curve grid must be ascending within [0, 1]");
  }

  const std::uint64_t base = rng.position();
  const RngStream view(rng.key());
  const size_t nbins = grid.size() + 1;  // last slot: beyond the grid
  const auto acc = run_trials<FuAcc>(pairs, threads, [&](long t, FuAcc& a) {
    if (a.bins.size() != nbins) a.bins.assign(nbins, 0);
    const std::uint64_t c = base + 4 * static_cast<std::uint64_t>(t);
    const Point p1{spec.quantile(view.unit_at(c)), spec.quantile(view.unit_at(c + 1))};
    const Point p2{spec.quantile(view.unit_at(c + 2)), spec.quantile(view.unit_at(c + 3))};
    const double u = u_statistic(p1, p2, spec, quad_points);
    ++a.pairs;
    if (u < 1.0) ++a.below_one;
    const size_t idx = std::lower_bound(grid.begin(), grid.end(), u) - grid.begin();
    a.bins[idx]++;
  });
  rng.advance(4 * static_cast<std::uint64_t>(pairs));

  FuCurveResult r;
  r.pairs = acc.pairs;
  r.check_n = check_n;
  r.fu_one_minus = static_cast<double>(acc.below_one) / acc.pairs;
  r.cdf.resize(grid.size());
  long running = 0;
  for (size_t g = 0; g < grid.size(); ++g) {
    running += acc.bins[g];
    r.cdf[g] = static_cast<double>(running) / acc.pairs;
  }

  double integral = 0.0, prev_u = 0.0, prev_h = 0.0;
  for (size_t g = 0; g < grid.size(); ++g) {
    const double h = std::pow(1.0 - grid[g], check_n - 3) * r.cdf[g];
    integral += 0.5 * (grid[g] - prev_u) * (h + prev_h);
    prev_u = grid[g];
    prev_h = h;
  }
  r.lemma5_check = (check_n - 2) * integral;
  r.grid = std::move(grid);
  return r;
}

}  // namespace esslab
