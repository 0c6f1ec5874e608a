// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace losmimo {

// Thin wrapper around a 64-bit Mersenne Twister.
//
// Monte-Carlo trials draw from substream(master, a, b), which seeds a fresh
// engine from the tuple (master, a, b) through std::seed_seq. Each trial owns
// its stream, so results do not depend on execution order.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  static RandomStream substream(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

  double normal(double mean, double stddev);
  double uniform(double lo, double hi);
  // Circular complex Gaussian with total variance `variance`.
  std::complex<double> complex_normal(double variance);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace losmimo
