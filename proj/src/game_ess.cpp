#include "esslab/game_ess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "esslab/census_scan.hpp"

namespace esslab {

namespace {

// Stored-matrix adapter for the shared census scan.
struct MatrixSource {
  const GameMatrix* game;
  int size() const { return game->size(); }
  double value(int i, int j) const { return (*game)(i, j); }
  double colkey(int i, int j) const { return (*game)(i, j); }
};

}  // namespace

GameMatrix::GameMatrix(int n) : n_(n), data_(static_cast<size_t>(n) * n, 0.0) {
  if (n < 1) throw std::invalid_argument("GameMatrix requires n >= 1");
}

GameMatrix GameMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  GameMatrix m(static_cast<int>(rows.size()));
  for (int i = 0; i < m.size(); ++i) {
    if (static_cast<int>(rows[i].size()) != m.size()) {
      throw std::invalid_argument("GameMatrix::from_rows requires a square array");
    }
    for (int j = 0; j < m.size(); ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

GameMatrix generate_game(int n, const DistributionSpec& spec, RngStream& rng) {
  if (n < 2) throw std::invalid_argument("generate_game requires n >= 2");
  GameMatrix m(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m.set(i, j, spec.sample(rng));
  }
  return m;
}

MixedStrategy MixedStrategy::pure(int n, int i) {
  MixedStrategy s{n, {i}, {1.0}};
  s.validate();
  return s;
}

MixedStrategy MixedStrategy::on_support(int n, std::vector<int> support,
                                        std::vector<double> weights) {
  MixedStrategy s{n, std::move(support), std::move(weights)};
  s.validate();
  return s;
}

void MixedStrategy::validate() const {
  if (support.empty() || support.size() != weights.size()) {
    throw std::invalid_argument("mixed strategy needs a nonempty aligned support");
  }
  double total = 0.0;
  int prev = -1;
  for (size_t k = 0; k < support.size(); ++k) {
    if (support[k] <= prev || support[k] >= n) {
      throw std::invalid_argument("support indices must be sorted, distinct, in range");
    }
    prev = support[k];
    if (!(weights[k] > 0.0)) throw std::invalid_argument("weights must be positive");
    total += weights[k];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("weights must sum to 1 within 1e-12");
  }
}

double payoff(const GameMatrix& game, const MixedStrategy& p, const MixedStrategy& q) {
  if (p.n != game.size() || q.n != game.size()) {
    throw std::invalid_argument("strategy dimension does not match the game");
  }
  double total = 0.0;
  for (size_t a = 0; a < p.support.size(); ++a) {
    double row = 0.0;
    for (size_t b = 0; b < q.support.size(); ++b) {
      row += q.weights[b] * game(p.support[a], q.support[b]);
    }
    total += p.weights[a] * row;
  }
  return total;
}

bool is_pure_ess(const GameMatrix& game, int i) {
  const int n = game.size();
  if (i < 0 || i >= n) throw std::invalid_argument("index out of range");
  const double diag = game(i, i);
  for (int j = 0; j < n; ++j) {
    if (j != i && !(diag > game(j, i))) return false;
  }
  return true;
}

std::optional<EssRecord> two_point_ess(const GameMatrix& game, int i, int j) {
  const int n = game.size();
  if (i == j || i < 0 || j < 0 || i >= n || j >= n) {
    throw std::invalid_argument("two_point_ess requires two distinct indices");
  }
  const double a = game(j, i) - game(i, i);
  const double b = game(i, j) - game(j, j);
  if (!(a > 0.0) || !(b > 0.0)) return std::nullopt;
  const double pi = b / (a + b);
  const double pj = a / (a + b);
  const double v = pi * game(i, i) + pj * game(i, j);
  for (int k = 0; k < n; ++k) {
    if (k == i || k == j) continue;
    if (!(pi * game(k, i) + pj * game(k, j) < v)) return std::nullopt;
  }
  const int lo = std::min(i, j), hi = std::max(i, j);
  const double wlo = lo == i ? pi : pj;
  const double whi = lo == i ? pj : pi;
  return EssRecord{MixedStrategy::on_support(n, {lo, hi}, {wlo, whi}), v,
                   EssKind::two_point};
}

std::optional<EssRecord> support_ess(const GameMatrix& game, std::span<const int> support) {
  const int n = game.size();
  const int l = static_cast<int>(support.size());
  if (l < 2 || l > n) {
    throw std::invalid_argument("support_ess requires 2 <= |T| <= n");
  }
  std::vector<int> t(support.begin(), support.end());
  std::sort(t.begin(), t.end());
  for (int k = 0; k < l; ++k) {
    if (t[k] < 0 || t[k] >= n || (k > 0 && t[k] == t[k - 1])) {
      throw std::invalid_argument("support indices must be distinct and in range");
    }
  }

  Eigen::MatrixXd m(l, l);
  for (int r = 0; r < l; ++r) {
    for (int c = 0; c < l; ++c) m(r, c) = game(t[r], t[c]);
  }
  std::vector<double> w;
  double v = 0.0;
  if (!detail::equalizer_weights(m, w, v)) return std::nullopt;
  for (int k = 0; k < n; ++k) {
    if (std::binary_search(t.begin(), t.end(), k)) continue;
    double row = 0.0;
    for (int c = 0; c < l; ++c) row += w[c] * game(k, t[c]);
    if (!(row < v)) return std::nullopt;
  }
  if (!detail::tangent_negative_definite(m, detail::definiteness_scale(m))) {
    return std::nullopt;
  }
  return EssRecord{MixedStrategy::on_support(n, std::move(t), std::move(w)), v,
                   l == 2 ? EssKind::two_point : EssKind::general};
}

namespace {

bool support_subset(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Footnote-level sanity: ESS supports are never comparable.
void assert_non_nesting(const EssCensus& c) {
  for (size_t a = 0; a < c.records.size(); ++a) {
    for (size_t b = 0; b < c.records.size(); ++b) {
      if (a == b) continue;
      const auto& sa = c.records[a].strategy.support;
      const auto& sb = c.records[b].strategy.support;
      if (sa.size() < sb.size() && support_subset(sa, sb)) {
        throw std::logic_error("census produced nested ESS supports");
      }
    }
  }
}

}  // namespace

EssCensus census(const GameMatrix& game, int max_support) {
  if (max_support < 1 || max_support > 3) {
    throw std::invalid_argument("census supports max_support in [1, 3]");
  }
  EssCensus result;
  for (int l = 1; l <= max_support; ++l) result.counts[l] = 0;
  const int n = game.size();

  detail::census_scan(
      MatrixSource{&game}, max_support,
      [&](int i) {
        result.counts[1]++;
        result.records.push_back({MixedStrategy::pure(n, i), game(i, i), EssKind::pure});
      },
      [&](int i, int j, double pi, double pj, double v) {
        result.counts[2]++;
        result.records.push_back(
            {MixedStrategy::on_support(n, {i, j}, {pi, pj}), v, EssKind::two_point});
      },
      [&](int i, int j, int k, double w0, double w1, double w2, double v) {
        result.counts[3]++;
        result.records.push_back(
            {MixedStrategy::on_support(n, {i, j, k}, {w0, w1, w2}), v, EssKind::general});
      });

  assert_non_nesting(result);
  return result;
}

}  // namespace esslab
