// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "losmimo/geometry.hpp"
#include "losmimo/oscillator.hpp"

namespace losmimo {

struct ChannelMatrix {
  Eigen::MatrixXcd h;  // M x N
  GridShape rx_shape;
  GridShape tx_shape;
};

// h_mn = exp(-j 2 pi r_mn / lambda), unit attenuation.
ChannelMatrix los_channel(const Eigen::MatrixXd& distances, double wavelength);
// Per-transmitter wavelengths, one per column.
ChannelMatrix los_channel(const Eigen::MatrixXd& distances, const Eigen::VectorXd& wavelengths);
ChannelMatrix los_channel(const LinkConfig& link);

// Channel with the static phase offsets folded in.
struct JointChannel {
  Eigen::MatrixXcd h;
};

JointChannel joint_channel(const ChannelMatrix& ch, const OscillatorModel& osc);

// Equal-entry classes of a symmetric (block-)Toeplitz channel. The class of
// (m, n) is (|m_y - n_y|, |m_x - n_x|), stored as id = dy * nx + dx.
class StructureMap {
 public:
  explicit StructureMap(GridShape shape);

  std::size_t class_of(std::size_t m, std::size_t n) const;
  std::pair<std::size_t, std::size_t> offsets(std::size_t class_id) const;
  std::size_t class_count() const noexcept { return shape_.size(); }
  std::size_t antennas() const noexcept { return shape_.size(); }
  GridShape shape() const noexcept { return shape_; }

  // Number of (m, n) pairs in each class.
  std::vector<std::size_t> class_sizes() const;

 private:
  GridShape shape_;
};

StructureMap structure_map(std::size_t ny, std::size_t nx);

// Largest to smallest singular value; +infinity when rank deficient.
double condition_number(const Eigen::MatrixXcd& h);

// Largest |h_a - h_b| over pairs of entries sharing a class.
double max_class_spread(const Eigen::MatrixXcd& h, const StructureMap& map);

}  // namespace losmimo
