// SPDX-License-Identifier: Apache-2.0
#include "losmimo/signal.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <variant>

#include "losmimo/errors.hpp"

namespace losmimo {

namespace {

using cd = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double draw_omega(double variance, RandomStream& rng) {
  if (variance == 0.0) return 0.0;
  const double sd = std::sqrt(variance);
  double w = rng.normal(0.0, sd);
  while (std::abs(w) >= std::numbers::pi) w = rng.normal(0.0, sd);
  return w;
}

double draw_phi(RandomStream& rng) {
  const double p = rng.uniform(0.0, kTwoPi);
  return p < kTwoPi ? p : 0.0;
}

}  // namespace

TrainingMatrix training_shifted_identity(std::size_t p, std::size_t n) {
  if (p == 0 || n == 0) throw InvalidArgument("training needs P >= 1 and N >= 1");
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < p; ++r) x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r % n)) = 1.0;
  return {x, TrainingKind::ShiftedIdentity};
}

TrainingMatrix training_orthogonal(std::size_t p, std::size_t n) {
  if (n == 0 || p < n) throw InvalidArgument("orthogonal training needs P >= N >= 1");
  Eigen::MatrixXcd x(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(n));
  const double scale = 1.0 / std::sqrt(static_cast<double>(p));
  for (std::size_t r = 0; r < p; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const double arg = -kTwoPi * static_cast<double>((r * c) % p) / static_cast<double>(p);
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = std::polar(scale, arg);
    }
  }
  return {x, TrainingKind::Orthogonal};
}

double snr_to_noise_variance(double snr_db) {
  if (!std::isfinite(snr_db)) throw InvalidArgument("SNR must be finite");
  return std::pow(10.0, -snr_db / 10.0);
}

OscillatorModel draw_offsets(OffsetKind kind, double omega_variance, RandomStream& rng,
                             std::size_t m, std::size_t n) {
  if (!(omega_variance >= 0.0)) throw InvalidArgument("omega variance must be non-negative");
  if (kind == OffsetKind::Single) {
    const double w = draw_omega(omega_variance, rng);
    return SingleOscillator{w, draw_phi(rng)};
  }
  PerPairOscillator pp{Eigen::MatrixXd(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)),
                       Eigen::MatrixXd(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n))};
  for (Eigen::Index i = 0; i < pp.omega.size(); ++i) {
    pp.omega(i) = draw_omega(omega_variance, rng);
    pp.phi(i) = draw_phi(rng);
  }
  return pp;
}

PilotBlock synthesize_rx(const JointChannel& h_phi, const OscillatorModel& osc,
                         const TrainingMatrix& x, double noise_variance, RandomStream& rng) {
  const Eigen::MatrixXcd& h = h_phi.h;
  if (x.x.cols() != h.cols()) throw ShapeMismatch("training width must equal the number of tx antennas");
  if (!(noise_variance >= 0.0)) throw InvalidArgument("noise variance must be non-negative");
  if (const auto* pp = std::get_if<PerPairOscillator>(&osc)) {
    if (pp->omega.rows() != h.rows() || pp->omega.cols() != h.cols()) {
      throw ShapeMismatch("per-pair offsets must be M x N");
    }
  }
  const Eigen::Index P = x.x.rows();
  const Eigen::Index M = h.rows();

  Eigen::MatrixXcd y;
  if (const auto* s = std::get_if<SingleOscillator>(&osc)) {
    y = x.x * h.transpose();
    for (Eigen::Index p = 0; p < P; ++p) y.row(p) *= std::polar(1.0, static_cast<double>(p + 1) * s->omega);
  } else {
    const auto& w = std::get<PerPairOscillator>(osc).omega;
    y = Eigen::MatrixXcd::Zero(P, M);
    for (Eigen::Index p = 0; p < P; ++p) {
      const double t = static_cast<double>(p + 1);
      for (Eigen::Index m = 0; m < M; ++m) {
        cd acc = 0.0;
        for (Eigen::Index n = 0; n < h.cols(); ++n) {
          if (x.x(p, n) == 0.0) continue;
          acc += std::polar(1.0, t * w(m, n)) * x.x(p, n) * h(m, n);
        }
        y(p, m) = acc;
      }
    }
  }
  if (noise_variance > 0.0) {
    for (Eigen::Index m = 0; m < M; ++m) {
      for (Eigen::Index p = 0; p < P; ++p) y(p, m) += rng.complex_normal(noise_variance);
    }
  }
  return PilotBlock{x, std::move(y), h_phi, osc, noise_variance};
}

}  // namespace losmimo
