#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "esslab/distributions.hpp"
#include "esslab/rng.hpp"

namespace esslab {

// Payoff matrix of a symmetric game: entry (i, j) is the payoff to a player
// replying with pure strategy i against context strategy j.  Stored
// column-major so per-column scans (the hot path of ESS certification) are
// contiguous.
class GameMatrix {
 public:
  explicit GameMatrix(int n);

  int size() const { return n_; }
  double operator()(int i, int j) const { return data_[static_cast<size_t>(j) * n_ + i]; }
  void set(int i, int j, double v) { data_[static_cast<size_t>(j) * n_ + i] = v; }

  static GameMatrix from_rows(const std::vector<std::vector<double>>& rows);

 private:
  int n_;
  std::vector<double> data_;
};

// Entries filled in row-major order from the stream, one uniform per entry.
// Requires n >= 2.
GameMatrix generate_game(int n, const DistributionSpec& spec, RngStream& rng);

// A point of the simplex with explicit support; weights are positive and sum
// to one within 1e-12.
struct MixedStrategy {
  int n = 0;
  std::vector<int> support;      // sorted, distinct, in [0, n)
  std::vector<double> weights;   // aligned with support

  static MixedStrategy pure(int n, int i);
  static MixedStrategy on_support(int n, std::vector<int> support,
                                  std::vector<double> weights);
  void validate() const;
};

enum class EssKind { pure, two_point, general };

struct EssRecord {
  MixedStrategy strategy;
  double payoff_v = 0.0;  // the equalized payoff R(p, p)
  EssKind kind = EssKind::pure;
};

struct EssCensus {
  std::map<int, long> counts;      // support size -> count, for 1..max_support
  std::vector<EssRecord> records;
};

// Bilinear extension R(p, q).
double payoff(const GameMatrix& game, const MixedStrategy& p, const MixedStrategy& q);

// Lemma-style certificates.  Indices are 0-based.
bool is_pure_ess(const GameMatrix& game, int i);
std::optional<EssRecord> two_point_ess(const GameMatrix& game, int i, int j);

// Certification for an arbitrary support set T, 2 <= |T| <= n: equalizer
// weights all positive, off-support rows strictly below the equalized payoff,
// and the symmetrized payoff form negative definite on the sum-zero tangent
// space (eigenvalues below -1e-10 * max|M|).
std::optional<EssRecord> support_ess(const GameMatrix& game, std::span<const int> support);

// Full census over supports of size 1..max_support (max_support in [1, 3]).
EssCensus census(const GameMatrix& game, int max_support);

}  // namespace esslab
