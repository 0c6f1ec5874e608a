// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "losmimo/channel.hpp"
#include "losmimo/oscillator.hpp"
#include "losmimo/random.hpp"

namespace losmimo {

enum class TrainingKind { ShiftedIdentity, Orthogonal };

struct TrainingMatrix {
  Eigen::MatrixXcd x;  // P x N
  TrainingKind kind;

  std::size_t pilots() const noexcept { return static_cast<std::size_t>(x.rows()); }
  std::size_t transmitters() const noexcept { return static_cast<std::size_t>(x.cols()); }
};

// Row p (1-based) has a single 1 in column ((p - 1) mod N) + 1.
TrainingMatrix training_shifted_identity(std::size_t p, std::size_t n);

// First N columns of the unitary P-point DFT, so X^H X = I_N. Needs P >= N.
TrainingMatrix training_orthogonal(std::size_t p, std::size_t n);

// Total complex noise variance 10^(-snr/10) for unit-energy pilots.
double snr_to_noise_variance(double snr_db);

enum class OffsetKind { Single, PerPair };

// omega ~ N(0, omega_variance) redrawn until |omega| < pi; phi ~ U[0, 2pi).
OscillatorModel draw_offsets(OffsetKind kind, double omega_variance, RandomStream& rng,
                             std::size_t m = 1, std::size_t n = 1);

struct PilotBlock {
  TrainingMatrix x;
  Eigen::MatrixXcd y;  // P x M, column m is the pilot block seen by rx antenna m
  JointChannel truth;
  OscillatorModel osc;
  double noise_variance = 0.0;
};

// y_m(p) = sum_n exp(j p omega_mn) X[p, n] h_phi[m, n] + noise, with p = 1..P.
PilotBlock synthesize_rx(const JointChannel& h_phi, const OscillatorModel& osc,
                         const TrainingMatrix& x, double noise_variance, RandomStream& rng);

}  // namespace losmimo
