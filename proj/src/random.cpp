// SPDX-License-Identifier: Apache-2.0
#include "losmimo/random.hpp"

#include <cmath>

namespace losmimo {

RandomStream::RandomStream(std::uint64_t seed) : engine_(seed) {}

RandomStream RandomStream::substream(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(master), hi(master), lo(a), hi(a), lo(b), hi(b)};
  RandomStream s(0);
  s.engine_.seed(seq);
  return s;
}

double RandomStream::normal(double mean, double stddev) {
  std::normal_distribution<double> d(mean, stddev);
  return d(engine_);
}

double RandomStream::uniform(double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(engine_);
}

std::complex<double> RandomStream::complex_normal(double variance) {
  if (variance <= 0.0) return {0.0, 0.0};
  const double s = std::sqrt(variance / 2.0);
  std::normal_distribution<double> d(0.0, s);
  const double re = d(engine_);
  const double im = d(engine_);
  return {re, im};
}

}  // namespace losmimo
