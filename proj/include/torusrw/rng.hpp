#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace torusrw {

/// xoshiro256** seeded by splitmix64. Stream k is the base sequence advanced by
/// k calls of the 2^128-step jump, so distinct streams never overlap.
/// Satisfies UniformRandomBitGenerator.
class WalkRng {
 public:
  using result_type = std::uint64_t;

  WalkRng(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform integer in [0, n), exact (Lemire's multiply-and-reject).
  std::uint32_t below(std::uint32_t n) {
    std::uint64_t m = (operator()() >> 32) * n;
    auto low = static_cast<std::uint32_t>(m);
    if (low < n) {
      const std::uint32_t threshold = (0u - n) % n;
      while (low < threshold) {
        m = (operator()() >> 32) * n;
        low = static_cast<std::uint32_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 32);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(operator()() >> 11) * 0x1.0p-53; }

  /// Exp(1) variate.
  double exponential();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  void jump();

  std::array<std::uint64_t, 4> s_{};
  std::uint64_t seed_;
  std::uint64_t stream_;
};

}  // namespace torusrw
