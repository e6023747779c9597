#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace qopt {

/// Counter-based generator (Philox4x32-10). A (seed, stream) pair names an
/// independent sequence, so per-instance and per-trial streams can be derived
/// from a master seed without any shared state between threads.
///
/// Satisfies UniformRandomBitGenerator. The distribution helpers below are
/// implemented here rather than taken from <random> because the standard
/// distributions are not specified bit-for-bit across library vendors.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  /// Unbiased integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);
  bool coin() { return ((*this)() >> 63) != 0; }
  /// Standard normal via Box-Muller.
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }

  std::uint64_t seed() const {
    return static_cast<std::uint64_t>(key_[0]) | (static_cast<std::uint64_t>(key_[1]) << 32);
  }
  std::uint64_t stream() const { return stream_; }

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

/// Mixes a master seed with a tag so different experiment components draw
/// from unrelated key spaces.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag);

}  // namespace qopt
