// SPDX-License-Identifier: Apache-2.0
#include "losmimo/estimators.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "losmimo/errors.hpp"

namespace losmimo {

namespace {

using cd = std::complex<double>;

// Accumulates principal arguments of ratios, skipping zero samples.
class ArgumentMean {
 public:
  void add(cd num, cd den) {
    if (num == 0.0 || den == 0.0) return;
    sum_ += std::arg(num / den);
    ++count_;
  }
  double value() const {
    if (count_ == 0) throw InvalidArgument("no usable sample ratio for the frequency estimate");
    return sum_ / static_cast<double>(count_);
  }

 private:
  double sum_ = 0.0;
  std::size_t count_ = 0;
};

// One line of antennas whose sub-channel is symmetric Toeplitz.
// Antenna k of the line has rx index `base + k * stride`; time t of the line
// is pilot row t (the first tx block).
struct Line {
  std::size_t base;
  std::size_t stride;
  std::size_t length;
};

void accumulate(ArgumentMean& acc, const Eigen::MatrixXcd& y, const Line& line, std::size_t p,
                PairingScheme scheme) {
  auto at = [&](std::size_t t, std::size_t k) {
    return y(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(line.base + k * line.stride));
  };
  if (scheme == PairingScheme::AntennaPairs) {
    for (std::size_t k = 0; k + 1 < line.length; k += 2) {
      for (std::size_t t = 0; t + 1 < p; ++t) acc.add(at(t + 1, k + 1), at(t, k));
    }
  } else {
    for (std::size_t t = 0; t + 1 < p; t += 2) {
      for (std::size_t k = 0; k + 1 < line.length; ++k) acc.add(at(t + 1, k + 1), at(t, k));
    }
  }
}

void check_pairing(std::size_t p, std::size_t length, PairingScheme scheme) {
  if (p < 2) throw InvalidArgument("frequency estimation needs P >= 2");
  if (length < 2) throw InvalidArgument("frequency estimation needs at least two antennas per line");
  if (p > length) throw InvalidArgument("frequency estimation needs P <= antennas per line");
  if (scheme == PairingScheme::AntennaPairs && length % 2 != 0) {
    throw InvalidArgument("antenna pairing needs an even number of antennas");
  }
  if (scheme == PairingScheme::TimePairs && p % 2 != 0) {
    throw InvalidArgument("time pairing needs an even number of pilots");
  }
}

}  // namespace

EstimationResult ls_channel(const TrainingMatrix& x, const Eigen::MatrixXcd& y) {
  if (y.rows() != x.x.rows()) throw ShapeMismatch("received block must have P rows");
  const Eigen::MatrixXcd gram = x.x.adjoint() * x.x;
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(gram);
  if (!lu.isInvertible()) throw SingularMatrix("X^H X is singular; least squares needs P >= N");
  // Columns of the solution are h_m; transpose to M x N.
  const Eigen::MatrixXcd sol = lu.solve(x.x.adjoint() * y);
  return {sol.transpose(), std::nullopt, "ls", x.pilots()};
}

EstimationResult toeplitz_channel_average(const Eigen::MatrixXcd& y, const StructureMap& map,
                                          TrainingKind kind, std::size_t p) {
  if (kind != TrainingKind::ShiftedIdentity) {
    throw InvalidArgument("class averaging needs shifted-identity pilots");
  }
  const std::size_t n = map.antennas();
  if (static_cast<std::size_t>(y.cols()) != n) throw ShapeMismatch("received block must have one column per antenna");
  if (p == 0 || p > static_cast<std::size_t>(y.rows())) throw InvalidArgument("P must be between 1 and the number of rows");

  std::vector<cd> sum(map.class_count(), 0.0);
  std::vector<std::size_t> count(map.class_count(), 0);
  for (std::size_t t = 0; t < p; ++t) {
    const std::size_t col = t % n;
    for (std::size_t m = 0; m < n; ++m) {
      const std::size_t k = map.class_of(m, col);
      sum[k] += y(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(m));
      ++count[k];
    }
  }
  std::vector<std::size_t> missing;
  for (std::size_t k = 0; k < count.size(); ++k) {
    if (count[k] == 0) missing.push_back(k);
  }
  if (!missing.empty()) {
    std::string list;
    for (auto k : missing) {
      const auto [dy, dx] = map.offsets(k);
      list += (list.empty() ? "" : ", ") + std::string("(") + std::to_string(dy) + "," + std::to_string(dx) + ")";
    }
    throw CoverageError("P = " + std::to_string(p) + " leaves structure classes unobserved: " + list, missing);
  }

  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd h(nn, nn);
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t c = 0; c < n; ++c) {
      const std::size_t k = map.class_of(m, c);
      h(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(c)) = sum[k] / static_cast<double>(count[k]);
    }
  }
  return {h, std::nullopt, "toeplitz", p};
}

double freq_offset_pairwise(const Eigen::MatrixXcd& y, std::size_t p, std::size_t m, PairingScheme scheme) {
  if (static_cast<std::size_t>(y.cols()) != m) throw ShapeMismatch("received block must have M columns");
  if (p > static_cast<std::size_t>(y.rows())) throw InvalidArgument("P exceeds the received block length");
  check_pairing(p, m, scheme);
  ArgumentMean acc;
  accumulate(acc, y, Line{0, 1, m}, p, scheme);
  return acc.value();
}

double freq_offset_pairwise(const Eigen::MatrixXcd& y, const StructureMap& map, std::size_t p,
                            PairingScheme scheme) {
  const GridShape g = map.shape();
  if (static_cast<std::size_t>(y.cols()) != g.size()) throw ShapeMismatch("received block must have M columns");
  if (p > static_cast<std::size_t>(y.rows())) throw InvalidArgument("P exceeds the received block length");
  if (g.nx == 1) return freq_offset_pairwise(y, p, g.ny, scheme);

  check_pairing(p, g.nx, scheme);
  ArgumentMean acc;
  for (std::size_t row = 0; row < g.ny; ++row) accumulate(acc, y, Line{row * g.nx, 1, g.nx}, p, scheme);
  return acc.value();
}

std::complex<double> diag_channel(const Eigen::MatrixXcd& y, double omega_hat, std::size_t p) {
  if (p == 0) throw InvalidArgument("diagonal read-out needs P >= 1");
  if (p > static_cast<std::size_t>(y.cols())) throw InvalidArgument("diagonal read-out needs P <= M");
  if (p > static_cast<std::size_t>(y.rows())) throw InvalidArgument("P exceeds the received block length");
  cd acc = 0.0;
  for (std::size_t t = 0; t < p; ++t) {
    const auto i = static_cast<Eigen::Index>(t);
    acc += std::polar(1.0, -static_cast<double>(t + 1) * omega_hat) * y(i, i);
  }
  return acc / static_cast<double>(p);
}

EstimationResult estimate_consecutive(const Eigen::MatrixXcd& y, const StructureMap& map, std::size_t p,
                                      PairingScheme scheme) {
  const double w = freq_offset_pairwise(y, map, p, scheme);
  Eigen::MatrixXcd z = y.topRows(static_cast<Eigen::Index>(p));
  for (Eigen::Index t = 0; t < z.rows(); ++t) z.row(t) *= std::polar(1.0, -static_cast<double>(t + 1) * w);
  EstimationResult r = toeplitz_channel_average(z, map, TrainingKind::ShiftedIdentity, p);
  r.omega_hat = w;
  r.estimator = "consecutive";
  return r;
}

}  // namespace losmimo
