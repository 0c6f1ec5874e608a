// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "losmimo/channel.hpp"
#include "losmimo/signal.hpp"

namespace losmimo {

struct EstimationResult {
  Eigen::MatrixXcd h_hat;  // M x N, joint-phase convention
  std::optional<double> omega_hat;
  std::string estimator;
  std::size_t pilots = 0;
};

// Per-antenna least squares (X^H X)^{-1} X^H y_m.
EstimationResult ls_channel(const TrainingMatrix& x, const Eigen::MatrixXcd& y);

// Mean of all samples falling into each structure class, broadcast back to
// M x N. Needs shifted-identity pilots so that sample (p, m) observes
// h[m, (p - 1) mod N]. Uses the first P rows of y.
EstimationResult toeplitz_channel_average(const Eigen::MatrixXcd& y, const StructureMap& map,
                                          TrainingKind kind, std::size_t p);

// Which sample ratios feed the frequency estimate.
//  AntennaPairs: y_{2m}(p+1) / y_{2m-1}(p) for m = 1..M/2, p = 1..P-1 (needs even M).
//  TimePairs:    y_{m+1}(2q) / y_m(2q-1)  for q = 1..P/2,  m = 1..M-1 (needs even P).
// Both ratios equal exp(j omega) on a symmetric Toeplitz channel.
enum class PairingScheme { AntennaPairs, TimePairs };

// Mean principal argument of the sample ratios for a ULA.
double freq_offset_pairwise(const Eigen::MatrixXcd& y, std::size_t p, std::size_t m,
                            PairingScheme scheme = PairingScheme::AntennaPairs);

// Same estimate on a rectangular array: ratios are formed along the x
// direction inside each block row, against the pilots of the first tx
// block. For N_x = 1 this is the ULA estimator along y.
double freq_offset_pairwise(const Eigen::MatrixXcd& y, const StructureMap& map, std::size_t p,
                            PairingScheme scheme = PairingScheme::AntennaPairs);

// (1/P) sum_p exp(-j p omega_hat) y_p(p): the diagonal read-out.
std::complex<double> diag_channel(const Eigen::MatrixXcd& y, double omega_hat, std::size_t p);

// Frequency estimate, derotation of every sample by exp(-j p omega_hat),
// then class averaging.
EstimationResult estimate_consecutive(const Eigen::MatrixXcd& y, const StructureMap& map, std::size_t p,
                                      PairingScheme scheme = PairingScheme::AntennaPairs);

}  // namespace losmimo
