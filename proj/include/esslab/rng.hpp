#pragma once

#include <cstdint>

namespace esslab {

// Counter-based uniform stream: output k is a pure function of (key, k),
// so the same logical stream can be read sequentially, out of order, or
// from several threads at once without coordination.  The generator is the
// splitmix64 sequence with the Weyl increment applied to the counter.
//
// Streams are single-owner when used sequentially; unit_at()/at() are const
// and safe to call concurrently.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key, std::uint64_t start = 0)
      : key_(key), counter_(start) {}

  // Decorrelated substream for one Monte Carlo trial.  Results of a trial
  // depend only on (master_seed, trial), never on scheduling order.
  static RngStream for_trial(std::uint64_t master_seed, std::uint64_t trial) {
    return RngStream(mix64(mix64(master_seed ^ kSeedSalt) + trial));
  }

  std::uint64_t next_u64() { return at(counter_++); }
  double next_unit() { return to_unit(next_u64()); }

  // Random access without advancing the cursor.
  std::uint64_t at(std::uint64_t index) const {
    return mix64(key_ + (index + 1) * kGolden);
  }
  double unit_at(std::uint64_t index) const { return to_unit(at(index)); }

  void advance(std::uint64_t count) { counter_ += count; }

  std::uint64_t key() const { return key_; }
  std::uint64_t position() const { return counter_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
  static constexpr std::uint64_t kSeedSalt = 0xD1B54A32D192ED03ull;

  static std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  // 53-bit mantissa; the half-step offset keeps values strictly inside (0,1),
  // so quantile transforms never see 0 or 1.
  static double to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53 + 0x1.0p-54;
  }

  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace esslab
