// SPDX-License-Identifier: Apache-2.0
#include "irsoc/rng.hpp"

#include <cmath>

namespace irsoc {

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t trial,
                     std::uint64_t slot, Purpose purpose,
                     std::uint64_t sub) noexcept {
  std::uint64_t key = splitmix64(master_seed);
  key = splitmix64(key ^ trial);
  key = splitmix64(key ^ (slot * 0xd1342543de82ef95ULL));
  key = splitmix64(key ^ static_cast<std::uint64_t>(purpose));
  key = splitmix64(key ^ (sub * 0x9e3779b97f4a7c15ULL));
  for (auto& s : s_) {
    key += 0x9e3779b97f4a7c15ULL;
    s = splitmix64(key);
  }
}

std::complex<double> RngStream::complex_normal(double variance) {
  const double scale = std::sqrt(variance / 2.0);
  const double re = normal();
  const double im = normal();
  return {scale * re, scale * im};
}

double RngStream::exponential(double mean) {
  // 1 - u lies in (0, 1], so the log is finite.
  return -mean * std::log1p(-uniform());
}

}  // namespace irsoc
