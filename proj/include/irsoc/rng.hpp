// SPDX-License-Identifier: Apache-2.0
//
// Deterministic random streams. Every stream is addressed by the tuple
// (master_seed, trial, slot, purpose); equal tuples give equal sequences.
#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <random>

namespace irsoc {

/// Tags for the independent consumers of randomness inside one slot.
enum class Purpose : std::uint64_t {
  kUserPositions = 1,
  kChannel = 2,
  kPhases = 3,
  kDirections = 4,
  kBaseline = 5,
  kScheduler = 6,
  kMisc = 7,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// xoshiro256** seeded through splitmix64 from the derivation tuple.
/// Satisfies UniformRandomBitGenerator, so the standard distributions apply.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t master_seed, std::uint64_t trial = 0,
                     std::uint64_t slot = 0,
                     Purpose purpose = Purpose::kMisc,
                     std::uint64_t sub = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
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

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform();
  }
  double normal() { return normal_(*this); }
  /// Circularly symmetric complex Gaussian with E|z|^2 = variance.
  std::complex<double> complex_normal(double variance = 1.0);
  double exponential(double mean = 1.0);

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace irsoc
