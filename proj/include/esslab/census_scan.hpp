#pragma once

// Shared ESS census algorithm, templated on the payoff source so the same
// scan runs against a stored GameMatrix or against lazily generated entries.
//
// Source requirements:
//   int size() const;
//   double value(int i, int j) const;    // R(i, j)
//   double colkey(int i, int j) const;   // strictly increasing function of
//                                        // value(i, j) within column j
//
// colkey lets a lazy source compare entries by their underlying uniforms and
// defer the quantile transform until an actual value is required.  Every
// strict decision is re-verified at value level, so both source kinds yield
// identical censuses.

#include <Eigen/Dense>
#include <cmath>
#include <vector>

namespace esslab::detail {

// Solves the equalizer system [M p = v 1; sum p = 1].  Returns false when the
// bordered system is singular or some weight is not strictly positive.
inline bool equalizer_weights(const Eigen::MatrixXd& m, std::vector<double>& w, double& v) {
  const int l = static_cast<int>(m.rows());
  Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(l + 1, l + 1);
  sys.topLeftCorner(l, l) = m;
  sys.topRightCorner(l, 1).setConstant(-1.0);
  sys.bottomLeftCorner(1, l).setConstant(1.0);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(l + 1);
  rhs(l) = 1.0;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
  if (!lu.isInvertible()) return false;
  Eigen::VectorXd sol = lu.solve(rhs);

  w.assign(l, 0.0);
  for (int i = 0; i < l; ++i) {
    if (!(sol(i) > 0.0)) return false;
    w[i] = sol(i);
  }
  v = sol(l);
  return true;
}

// Negative definiteness of (M + M^T)/2 on the sum-zero subspace, checked as
// all eigenvalues of B^T ((M+M^T)/2) B being below -eps_def, with B an
// orthonormal (Helmert) basis of that subspace.
inline bool tangent_negative_definite(const Eigen::MatrixXd& m, double eps_def) {
  const int l = static_cast<int>(m.rows());
  Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::MatrixXd basis(l, l - 1);
  for (int c = 0; c < l - 1; ++c) {
    const double norm = 1.0 / std::sqrt(static_cast<double>(c + 1) * (c + 2));
    for (int r = 0; r < l; ++r) {
      basis(r, c) = r <= c ? norm : (r == c + 1 ? -(c + 1) * norm : 0.0);
    }
  }
  Eigen::MatrixXd reduced = basis.transpose() * sym * basis;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(reduced);
  return eigen.eigenvalues().maxCoeff() < -eps_def;
}

inline double definiteness_scale(const Eigen::MatrixXd& m) {
  return 1e-10 * m.cwiseAbs().maxCoeff();
}

template <class Source, class PureFn, class PairFn, class TripleFn>
void census_scan(const Source& g, int max_support, PureFn&& on_pure,
                 PairFn&& on_pair, TripleFn&& on_triple) {
  const int n = g.size();

  // Pure: diagonal strictly maximal in its column.  The colkey argmax gives
  // the unique candidate; the value-level recheck settles rounding ties.
  for (int j = 0; j < n; ++j) {
    int best = 0;
    double best_key = g.colkey(0, j);
    for (int i = 1; i < n; ++i) {
      double key = g.colkey(i, j);
      if (key > best_key) {
        best_key = key;
        best = i;
      }
    }
    if (best != j) continue;
    const double diag = g.value(j, j);
    bool strict = true;
    for (int i = 0; i < n && strict; ++i) {
      if (i != j && !(diag > g.value(i, j))) strict = false;
    }
    if (strict) on_pure(j);
  }

  if (max_support < 2) return;

  // Two-point: requires R(j,i) > R(i,i) and R(i,j) > R(j,j); then the
  // equalizer mixture must strictly dominate every other row.  The row loop
  // exits on the first violation, which keeps the expected per-pair cost
  // constant.
  for (int i = 0; i < n; ++i) {
    const double key_ii = g.colkey(i, i);
    for (int j = i + 1; j < n; ++j) {
      if (!(g.colkey(j, i) > key_ii)) continue;
      if (!(g.colkey(i, j) > g.colkey(j, j))) continue;
      const double rii = g.value(i, i);
      const double rji = g.value(j, i);
      const double rjj = g.value(j, j);
      const double rij = g.value(i, j);
      const double a = rji - rii;
      const double b = rij - rjj;
      if (!(a > 0.0) || !(b > 0.0)) continue;
      const double pi = b / (a + b);
      const double pj = a / (a + b);
      const double v = pi * rii + pj * rij;
      bool dominated = false;
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (!(pi * g.value(k, i) + pj * g.value(k, j) < v)) {
          dominated = true;
          break;
        }
      }
      if (!dominated) on_pair(i, j, pi, pj, v);
    }
  }

  if (max_support < 3) return;

  // Three-point supports: equalizer + off-support dominance + tangent
  // negative definiteness.  Cubic in n; intended for moderate sizes.
  Eigen::MatrixXd m(3, 3);
  std::vector<double> w;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        const int t[3] = {i, j, k};
        for (int r = 0; r < 3; ++r) {
          for (int c = 0; c < 3; ++c) m(r, c) = g.value(t[r], t[c]);
        }
        double v = 0.0;
        if (!equalizer_weights(m, w, v)) continue;
        bool dominated = false;
        for (int q = 0; q < n && !dominated; ++q) {
          if (q == i || q == j || q == k) continue;
          const double row =
              w[0] * g.value(q, i) + w[1] * g.value(q, j) + w[2] * g.value(q, k);
          if (!(row < v)) dominated = true;
        }
        if (dominated) continue;
        if (!tangent_negative_definite(m, definiteness_scale(m))) continue;
        on_triple(i, j, k, w[0], w[1], w[2], v);
      }
    }
  }
}

}  // namespace esslab::detail
