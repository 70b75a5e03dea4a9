#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "esslab/distributions.hpp"
#include "esslab/rng.hpp"

namespace esslab {

// Lazily evaluated random game: entry (i, j) is the quantile transform of
// uniform number i*n + j of the counter-based stream with the given key --
// exactly the values generate_game would store for that stream, with no n^2
// storage.  The diagonal and a band of leading rows are precomputed because
// the census scan revisits them constantly; everything else is recomputed on
// demand.
class CounterGame {
 public:
  CounterGame(int n, const DistributionSpec& spec, std::uint64_t key,
              int cached_rows = 48)
      : n_(n), spec_(spec), stream_(key), cached_rows_(std::min(cached_rows, n)) {
    diag_.resize(n_);
    for (int i = 0; i < n_; ++i) diag_[i] = spec_.quantile(stream_.unit_at(index(i, i)));
    rows_.resize(static_cast<size_t>(cached_rows_) * n_);
    for (int i = 0; i < cached_rows_; ++i) {
      for (int j = 0; j < n_; ++j) {
        rows_[static_cast<size_t>(i) * n_ + j] = spec_.quantile(stream_.unit_at(index(i, j)));
      }
    }
  }

  int size() const { return n_; }

  double value(int i, int j) const {
    if (i < cached_rows_) return rows_[static_cast<size_t>(i) * n_ + j];
    if (i == j) return diag_[i];
    return spec_.quantile(stream_.unit_at(index(i, j)));
  }

  // The raw uniform: strictly increasing in the entry value, so it can stand
  // in for strict within-column comparisons without the quantile cost.
  double colkey(int i, int j) const { return stream_.unit_at(index(i, j)); }

 private:
  std::uint64_t index(int i, int j) const {
    return static_cast<std::uint64_t>(i) * n_ + j;  // row-major stream layout
  }

  int n_;
  DistributionSpec spec_;
  RngStream stream_;
  int cached_rows_;
  std::vector<double> diag_;
  std::vector<double> rows_;
};

}  // namespace esslab
