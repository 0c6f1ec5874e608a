// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "losmimo/random.hpp"

namespace losmimo {

using Point3 = Eigen::Vector3d;

// Array grid dimensions. Element (iy, ix) has linear index iy * nx + ix.
struct GridShape {
  std::size_t ny = 1;
  std::size_t nx = 1;

  std::size_t size() const noexcept { return ny * nx; }
  bool operator==(const GridShape&) const = default;
};

class ArrayGeometry {
 public:
  ArrayGeometry(std::vector<Point3> positions, GridShape shape);

  const std::vector<Point3>& positions() const noexcept { return positions_; }
  const Point3& position(std::size_t k) const { return positions_.at(k); }
  GridShape shape() const noexcept { return shape_; }
  std::size_t size() const noexcept { return positions_.size(); }

  ArrayGeometry translated(const Point3& offset) const;

 private:
  std::vector<Point3> positions_;
  GridShape shape_;
};

// Linear array of n elements along `axis`, centred on `center`. Shape (n, 1).
ArrayGeometry build_ula(std::size_t n, double spacing, const Point3& axis, const Point3& center);

// Rectangular array; the y index runs along axis_y and the x index along axis_x.
ArrayGeometry build_ura(std::size_t ny, std::size_t nx, double dy, double dx, const Point3& axis_y,
                        const Point3& axis_x, const Point3& center);

// Element spacing sqrt(lambda * R / n) giving orthogonal LOS channel columns.
double optimal_spacing(double distance, double wavelength, std::size_t n_dim);

struct LinkConfig {
  ArrayGeometry tx;
  ArrayGeometry rx;
  double distance;     // broadside separation of the array centres [m]
  double wavelength;   // carrier wavelength [m]
  double symbol_rate;  // [Hz]

  void validate() const;
};

// Canonical symmetric link: both arrays lie in planes normal to the x axis,
// tx centred at the origin and rx at (R, 0, 0). Grid y runs along e_y and
// grid x along e_z. Spacing is optimal per dimension.
LinkConfig symmetric_link(GridShape shape, double distance, double wavelength,
                          double symbol_rate = 1.0e9);

// Entry (m, n) is the distance from rx element m to tx element n.
Eigen::MatrixXd pairwise_distances(const LinkConfig& link);

// Adds i.i.d. N(0, sigma^2) to every coordinate.
ArrayGeometry perturb_positions(const ArrayGeometry& g, double sigma, RandomStream& rng);

}  // namespace losmimo
