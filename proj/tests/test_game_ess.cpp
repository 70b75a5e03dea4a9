#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "esslab/game_ess.hpp"
#include "ess_oracle.hpp"

using namespace esslab;

namespace {

GameMatrix random_game(int n, const DistributionSpec& spec, std::uint64_t seed) {
  RngStream rng(RngStream::for_trial(seed, 0).key());
  return generate_game(n, spec, rng);
}

std::set<std::vector<int>> support_set(const EssCensus& census) {
  std::set<std::vector<int>> out;
  for (const auto& rec : census.records) out.insert(rec.strategy.support);
  return out;
}

}  // namespace

TEST_CASE("payoff is the bilinear extension") {
  auto g = GameMatrix::from_rows({{1, 3}, {2, 4}});
  CHECK(payoff(g, MixedStrategy::pure(2, 0), MixedStrategy::pure(2, 1)) == 3.0);
  CHECK(payoff(g, MixedStrategy::pure(2, 1), MixedStrategy::pure(2, 0)) == 2.0);
  auto half = MixedStrategy::on_support(2, {0, 1}, {0.5, 0.5});
  CHECK(payoff(g, half, half) == doctest::Approx(2.5).epsilon(1e-15));

  // random strategies against a dense double-sum oracle
  RngStream rng(314);
  auto spec = DistributionSpec::uniform();
  auto r = generate_game(5, spec, rng);
  for (int rep = 0; rep < 50; ++rep) {
    double wp[5], wq[5], sp = 0.0, sq = 0.0;
    for (int i = 0; i < 5; ++i) {
      wp[i] = rng.next_unit();
      wq[i] = rng.next_unit();
      sp += wp[i];
      sq += wq[i];
    }
    std::vector<double> pw, qw;
    for (int i = 0; i < 5; ++i) {
      pw.push_back(wp[i] / sp);
      qw.push_back(wq[i] / sq);
    }
    // renormalize the last weight so the sums are exactly 1
    pw[4] = 1.0 - pw[0] - pw[1] - pw[2] - pw[3];
    qw[4] = 1.0 - qw[0] - qw[1] - qw[2] - qw[3];
    auto p = MixedStrategy::on_support(5, {0, 1, 2, 3, 4}, pw);
    auto q = MixedStrategy::on_support(5, {0, 1, 2, 3, 4}, qw);
    double direct = 0.0;
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) direct += pw[i] * qw[j] * r(i, j);
    }
    CHECK(payoff(r, p, q) == doctest::Approx(direct).epsilon(1e-12));
  }

  auto p3 = MixedStrategy::pure(3, 0);
  CHECK_THROWS_AS((void)payoff(g, p3, p3), std::invalid_argument);
}

TEST_CASE("mixed strategy validation") {
  CHECK_THROWS_AS(MixedStrategy::on_support(3, {0, 0}, {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(MixedStrategy::on_support(3, {0, 3}, {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(MixedStrategy::on_support(3, {0, 1}, {0.7, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(MixedStrategy::on_support(3, {0, 1}, {1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("pure ESS is a strict column maximum on the diagonal") {
  CHECK(is_pure_ess(GameMatrix::from_rows({{2, 0}, {1, 0}}), 0));
  CHECK_FALSE(is_pure_ess(GameMatrix::from_rows({{2, 0}, {2, 0}}), 0));  // tie fails

  // P(column 0 has its maximum on the diagonal) = 1/n
  auto spec = DistributionSpec::uniform();
  RngStream rng(41);
  const int trials = 100000, n = 10;
  long hits = 0;
  for (int t = 0; t < trials; ++t) {
    hits += is_pure_ess(generate_game(n, spec, rng), 0);
  }
  CHECK(std::abs(hits / static_cast<double>(trials) - 0.1) < 0.003);
}

TEST_CASE("two-point certificates") {
  auto sym = two_point_ess(GameMatrix::from_rows({{0, 1}, {1, 0}}), 0, 1);
  REQUIRE(sym.has_value());
  CHECK(sym->strategy.weights[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sym->payoff_v == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sym->kind == EssKind::two_point);

  auto g = GameMatrix::from_rows({{0, 3, 9}, {2, 0, -4}, {1, 1, 5}});
  auto rec = two_point_ess(g, 0, 1);
  REQUIRE(rec.has_value());
  CHECK(rec->strategy.weights[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(rec->strategy.weights[1] == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(rec->payoff_v == doctest::Approx(1.2).epsilon(1e-15));
  // invader-grid oracle over the support simplex
  CHECK(test_oracle::oracle_ess1(g, {{0, 1}, {0.6, 0.4}, 1.2}));
  CHECK(test_oracle::oracle_ess2(g, {{0, 1}, {0.6, 0.4}, 1.2}));

  // third row blocks the mixture when its payoff reaches v
  auto blocked = GameMatrix::from_rows({{0, 3, 9}, {2, 0, -4}, {1.5, 1.5, 5}});
  CHECK_FALSE(two_point_ess(blocked, 0, 1).has_value());

  // ties are defined to fail strictness
  CHECK_FALSE(two_point_ess(GameMatrix::from_rows({{1, 3}, {1, 0}}), 0, 1).has_value());

  CHECK_THROWS_AS((void)two_point_ess(g, 1, 1), std::invalid_argument);

  // P(two-point ESS on the only pair of a 2x2 game) = 1/4
  auto spec = DistributionSpec::uniform();
  RngStream rng(42);
  const int trials = 100000;
  long hits = 0;
  for (int t = 0; t < trials; ++t) {
    hits += two_point_ess(generate_game(2, spec, rng), 0, 1).has_value();
  }
  CHECK(std::abs(hits / static_cast<double>(trials) - 0.25) < 0.005);
}

TEST_CASE("support_ess agrees with two_point_ess on pairs") {
  auto spec = DistributionSpec::uniform();
  RngStream rng(43);
  for (int t = 0; t < 10000; ++t) {
    auto g = generate_game(5, spec, rng);
    for (int i = 0; i < 5; ++i) {
      for (int j = i + 1; j < 5; ++j) {
        const int support[2] = {i, j};
        auto a = two_point_ess(g, i, j);
        auto b = support_ess(g, support);
        REQUIRE(a.has_value() == b.has_value());
        if (a) {
          CHECK(std::abs(a->strategy.weights[0] - b->strategy.weights[0]) <= 1e-12);
          CHECK(std::abs(a->strategy.weights[1] - b->strategy.weights[1]) <= 1e-12);
          CHECK(a->payoff_v == doctest::Approx(b->payoff_v).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("support_ess on the classic no-ESS cycle") {
  // equalizer exists with equal weights, but the symmetrized tangent form is
  // identically zero, so certification must refuse
  auto rsp = GameMatrix::from_rows({{0, -1, 1}, {1, 0, -1}, {-1, 1, 0}});
  const int support[3] = {0, 1, 2};
  CHECK_FALSE(support_ess(rsp, support).has_value());
  CHECK(census(rsp, 3).records.empty());
}

TEST_CASE("support_ess certifies the negative identity") {
  auto g = GameMatrix::from_rows({{-1, 0, 0}, {0, -1, 0}, {0, 0, -1}});
  const int support[3] = {0, 1, 2};
  auto rec = support_ess(g, support);
  REQUIRE(rec.has_value());
  CHECK(rec->strategy.weights[0] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(rec->payoff_v == doctest::Approx(-1.0 / 3).epsilon(1e-12));
  CHECK(rec->kind == EssKind::general);
}

TEST_CASE("support_ess validates its input") {
  auto g = GameMatrix::from_rows({{0, 1}, {1, 0}});
  const int tiny[1] = {0};
  const int dup[2] = {1, 1};
  const int range[2] = {0, 7};
  CHECK_THROWS_AS((void)support_ess(g, tiny), std::invalid_argument);
  CHECK_THROWS_AS((void)support_ess(g, dup), std::invalid_argument);
  CHECK_THROWS_AS((void)support_ess(g, range), std::invalid_argument);
}

TEST_CASE("census on closed-form games") {
  auto anti = census(GameMatrix::from_rows({{0, 1}, {1, 0}}), 2);
  CHECK(anti.counts.at(1) == 0);
  CHECK(anti.counts.at(2) == 1);
  auto diag = census(GameMatrix::from_rows({{1, 0}, {0, 1}}), 2);
  CHECK(diag.counts.at(1) == 2);
  CHECK(diag.counts.at(2) == 0);
  CHECK_THROWS_AS((void)census(GameMatrix::from_rows({{1, 0}, {0, 1}}), 4),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)census(GameMatrix::from_rows({{1, 0}, {0, 1}}), 0),
                  std::invalid_argument);
}

TEST_CASE("census counts match records and mean S1 is one") {
  auto spec = DistributionSpec::uniform();
  RngStream rng(44);
  const int trials = 100000, n = 20;
  unsigned long long s1_total = 0;
  for (int t = 0; t < trials; ++t) {
    auto g = generate_game(n, spec, rng);
    auto c = census(g, 2);
    long pure = 0, two = 0;
    for (const auto& rec : c.records) {
      pure += rec.strategy.support.size() == 1;
      two += rec.strategy.support.size() == 2;
    }
    REQUIRE(c.counts.at(1) == pure);
    REQUIRE(c.counts.at(2) == two);
    s1_total += pure;
  }
  CHECK(std::abs(s1_total / static_cast<double>(trials) - 1.0) < 0.01);
}

TEST_CASE("census is deterministic in the seed") {
  auto spec = DistributionSpec::cauchy();
  auto a = census(random_game(30, spec, 7), 2);
  auto b = census(random_game(30, spec, 7), 2);
  REQUIRE(a.records.size() == b.records.size());
  for (size_t k = 0; k < a.records.size(); ++k) {
    CHECK(a.records[k].strategy.support == b.records[k].strategy.support);
    CHECK(a.records[k].payoff_v == b.records[k].payoff_v);
  }
}

TEST_CASE("census is affine equivariant") {
  auto spec = DistributionSpec::uniform();
  const double lambda = 2.5, nu = -1.25;
  for (int t = 0; t < 100; ++t) {
    auto g = random_game(8, spec, 4000 + t);
    GameMatrix h(8);
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) h.set(i, j, lambda * g(i, j) + nu);
    }
    auto cg = census(g, 3);
    auto ch = census(h, 3);
    REQUIRE(cg.counts == ch.counts);
    REQUIRE(cg.records.size() == ch.records.size());
    for (size_t k = 0; k < cg.records.size(); ++k) {
      CHECK(cg.records[k].strategy.support == ch.records[k].strategy.support);
      for (size_t w = 0; w < cg.records[k].strategy.weights.size(); ++w) {
        CHECK(std::abs(cg.records[k].strategy.weights[w] -
                       ch.records[k].strategy.weights[w]) <= 1e-12);
      }
      CHECK(ch.records[k].payoff_v ==
            doctest::Approx(lambda * cg.records[k].payoff_v + nu).epsilon(1e-9));
    }
  }
}

TEST_CASE("census never nests supports") {
  auto spec = DistributionSpec::cauchy();
  for (int t = 0; t < 300; ++t) {
    auto c = census(random_game(7, spec, 5000 + t), 3);
    for (const auto& a : c.records) {
      for (const auto& b : c.records) {
        if (&a == &b) continue;
        const auto& sa = a.strategy.support;
        const auto& sb = b.strategy.support;
        if (sa.size() < sb.size()) {
          CHECK_FALSE(std::includes(sb.begin(), sb.end(), sa.begin(), sa.end()));
        }
      }
    }
  }
}

TEST_CASE("census matches the definition-level oracle") {
  for (auto spec : {DistributionSpec::uniform(), DistributionSpec::cauchy()}) {
    CAPTURE(spec.name());
    long found = 0;
    for (int t = 0; t < 1000; ++t) {
      auto g = random_game(6, spec, 60000 + t);
      auto c = census(g, 3);
      auto oracle = test_oracle::oracle_census(g, 3);
      std::set<std::vector<int>> oracle_supports;
      for (const auto& rec : oracle) oracle_supports.insert(rec.support);
      REQUIRE(support_set(c) == oracle_supports);
      // matched records carry the same equalizer
      for (const auto& rec : c.records) {
        for (const auto& orec : oracle) {
          if (orec.support != rec.strategy.support) continue;
          CHECK(rec.payoff_v == doctest::Approx(orec.v).epsilon(1e-9));
          for (size_t w = 0; w < orec.weights.size(); ++w) {
            CHECK(rec.strategy.weights[w] ==
                  doctest::Approx(orec.weights[w]).epsilon(1e-9));
          }
        }
      }
      found += static_cast<long>(c.records.size());
    }
    CHECK(found > 500);  // the comparison is not vacuous
  }
}

TEST_CASE("every census record passes the definition oracle") {
  auto spec = DistributionSpec::lognormal();
  for (int t = 0; t < 200; ++t) {
    auto g = random_game(6, spec, 70000 + t);
    for (const auto& rec : census(g, 3).records) {
      test_oracle::OracleRecord orec{rec.strategy.support, rec.strategy.weights,
                                     rec.payoff_v};
      CHECK(test_oracle::oracle_ess1(g, orec));
      if (rec.strategy.support.size() >= 2) CHECK(test_oracle::oracle_ess2(g, orec));
    }
  }
}

TEST_CASE("generate_game contract") {
  auto spec = DistributionSpec::cauchy();
  RngStream a(8), b(8);
  auto g1 = generate_game(3, spec, a);
  auto g2 = generate_game(3, spec, b);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(g1(i, j) == g2(i, j));
      CHECK(std::isfinite(g1(i, j)));
    }
  }
  // row-major fill order from the stream
  RngStream c(8);
  CHECK(g1(0, 0) == spec.quantile(c.unit_at(0)));
  CHECK(g1(0, 1) == spec.quantile(c.unit_at(1)));
  CHECK(g1(1, 0) == spec.quantile(c.unit_at(3)));

  RngStream r(9);
  CHECK_THROWS_AS((void)generate_game(1, spec, r), std::invalid_argument);

  auto uni = DistributionSpec::uniform();
  RngStream rng(10);
  double sum = 0.0;
  for (int t = 0; t < 10000; ++t) {
    auto g = generate_game(5, uni, rng);
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) sum += g(i, j);
    }
  }
  CHECK(std::abs(sum / (10000.0 * 25.0) - 0.5) < 0.01);
}
