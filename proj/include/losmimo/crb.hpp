// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "losmimo/channel.hpp"
#include "losmimo/signal.hpp"

namespace losmimo {

// Per-parameter variance bounds. Channel parameters come first (real parts,
// then imaginary parts), followed by any frequency offsets.
struct CrbReport {
  Eigen::VectorXd channel_real;
  Eigen::VectorXd channel_imag;
  Eigen::VectorXd omega;  // empty when no offset is modelled
  Eigen::MatrixXd covariance;
  std::vector<std::string> names;
  double condition = 1.0;  // of the Fisher information

  bool has_omega() const noexcept { return omega.size() > 0; }
  // Mean per-real-dimension channel bound, i.e. mean of (re + im) / 2.
  double channel_bound() const;
  double omega_bound() const;
  bool ill_conditioned() const noexcept { return condition > 1e12; }
};

// (sigma^2 / 2) * inverse of [[Re A, -Im A], [Im A, Re A]] with A = X^H X.
CrbReport crb_no_offset(const TrainingMatrix& x, double noise_variance);

// Per-antenna bound with one offset per tx antenna (omega and h_phi are
// N-vectors for a fixed rx antenna).
CrbReport crb_with_offset(const TrainingMatrix& x, const Eigen::VectorXd& omega,
                          const Eigen::VectorXcd& h_phi, double noise_variance);

// Per-antenna bound when all tx antennas share one offset.
CrbReport crb_with_common_offset(const TrainingMatrix& x, double omega,
                                 const Eigen::VectorXcd& h_phi, double noise_variance);

// Exact bound for the full M x N single-oscillator system whose channel is
// parameterised by its structure classes. `class_values` holds one value per
// class. Channel bounds are reported per entry (M * N, row-major).
CrbReport crb_structured_system(const StructureMap& map, const TrainingMatrix& x, double omega,
                                const Eigen::VectorXcd& class_values, double noise_variance);

// Divides every bound by M.
CrbReport system_scale(CrbReport report, std::size_t m);

// Real Fisher information 2/sigma^2 * Re(J^H J) for the per-antenna model.
Eigen::MatrixXd fisher_with_offset(const TrainingMatrix& x, const Eigen::VectorXd& omega,
                                   const Eigen::VectorXcd& h_phi, double noise_variance);

bool is_psd(const Eigen::MatrixXd& a, double rel_tol = 1e-10);

}  // namespace losmimo
