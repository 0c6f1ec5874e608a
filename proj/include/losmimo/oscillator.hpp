// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <variant>

#include <Eigen/Dense>

namespace losmimo {

// One oscillator per terminal: every antenna pair sees the same offsets.
struct SingleOscillator {
  double omega = 0.0;  // rad/sample
  double phi = 0.0;    // rad
};

// Independent oscillator per antenna pair; both matrices are M x N.
struct PerPairOscillator {
  Eigen::MatrixXd omega;
  Eigen::MatrixXd phi;
};

using OscillatorModel = std::variant<SingleOscillator, PerPairOscillator>;

// Throws if |omega| >= pi or phi is outside [0, 2*pi).
void validate(const OscillatorModel& osc);

double omega_at(const OscillatorModel& osc, std::size_t m, std::size_t n);
double phi_at(const OscillatorModel& osc, std::size_t m, std::size_t n);

}  // namespace losmimo
