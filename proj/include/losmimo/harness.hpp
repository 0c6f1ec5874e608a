// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "losmimo/channel.hpp"
#include "losmimo/estimators.hpp"
#include "losmimo/geometry.hpp"

namespace losmimo {

enum class ExperimentKind { Fig2, Fig3, Fig4, Custom };
enum class EstimatorKind { LeastSquares, Toeplitz, Consecutive };
enum class Parameter { Channel, Omega };

std::string to_string(ExperimentKind k);
std::string to_string(EstimatorKind k);
std::string to_string(Parameter p);
ExperimentKind parse_experiment_kind(std::string_view s);
EstimatorKind parse_estimator_kind(std::string_view s);

// Pilot count, either absolute or a fraction N / divisor of the array size.
struct PilotSpec {
  std::size_t count = 0;
  std::size_t divisor = 0;

  static PilotSpec absolute(std::size_t p) { return {p, 0}; }
  static PilotSpec fraction(std::size_t d) { return {0, d}; }
  std::size_t resolve(std::size_t n) const;
  bool operator==(const PilotSpec&) const = default;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Custom;
  GridShape shape{1, 1};
  std::vector<std::size_t> antennas;  // ULA sizes to sweep; empty means use `shape`
  std::vector<PilotSpec> pilots;
  std::vector<double> snr_db;
  std::vector<EstimatorKind> estimators;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  std::size_t threads = 1;  // 0 = hardware concurrency
  double omega_variance = 0.0;
  bool random_phase = true;
  PairingScheme pairing = PairingScheme::TimePairs;
  std::vector<double> sigma_pos{0.0};
  double wavelength = 0.005;
  double distance = 5.0;
  double symbol_rate = 1.0e9;
  bool noiseless = false;
  bool crb_rows = true;
  std::string output;

  void validate() const;
  std::vector<GridShape> array_shapes() const;
  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig preset_config(ExperimentKind kind);
ExperimentConfig preset_config(std::string_view name);
std::vector<std::string> preset_names();

struct MseRecord {
  std::string experiment;
  Parameter parameter = Parameter::Channel;
  std::string estimator;
  double snr_db = 0.0;
  std::size_t n_antennas = 0;
  std::size_t p_pilots = 0;
  double mse = 0.0;
  double crb = 0.0;
  double mc_std_error = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

// Mean over entries of |h_hat - h|^2 / 2.
double channel_mse(const Eigen::MatrixXcd& h_hat, const Eigen::MatrixXcd& h);
// Raw squared difference, no wrapping.
double omega_mse(double omega_hat, double omega);

// Channel bound per real dimension: orthogonal P = N pilots, scaled by 1/M.
double channel_crb(std::size_t m, double noise_variance);
// Frequency-offset bound for a square array with P shifted-identity pilots.
// Uses the per-antenna bound scaled by 1/M when it exists, otherwise the
// exact structured system bound. NaN if neither is identifiable.
double omega_crb(GridShape shape, std::size_t p, double noise_variance);

std::vector<MseRecord> run_experiment(const ExperimentConfig& cfg);
// Bound rows only, without Monte-Carlo trials.
std::vector<MseRecord> crb_records(const ExperimentConfig& cfg);

}  // namespace losmimo
