// SPDX-License-Identifier: Apache-2.0
#include "losmimo/geometry.hpp"

#include <cmath>
#include <string>

#include "losmimo/errors.hpp"

namespace losmimo {

namespace {

constexpr double kAxisTol = 1e-9;

void require_unit(const Point3& v, const char* name) {
  if (std::abs(v.norm() - 1.0) > kAxisTol) {
    throw InvalidArgument(std::string(name) + " must be a unit vector");
  }
}

}  // namespace

ArrayGeometry::ArrayGeometry(std::vector<Point3> positions, GridShape shape)
    : positions_(std::move(positions)), shape_(shape) {
  if (positions_.empty()) throw InvalidArgument("array needs at least one element");
  if (shape_.size() != positions_.size()) {
    throw ShapeMismatch("grid shape " + std::to_string(shape_.ny) + "x" +
                        std::to_string(shape_.nx) + " does not match " +
                        std::to_string(positions_.size()) + " positions");
  }
}

ArrayGeometry ArrayGeometry::translated(const Point3& offset) const {
  std::vector<Point3> p = positions_;
  for (auto& q : p) q += offset;
  return ArrayGeometry(std::move(p), shape_);
}

ArrayGeometry build_ula(std::size_t n, double spacing, const Point3& axis, const Point3& center) {
  if (n == 0) throw InvalidArgument("ULA needs N >= 1");
  if (!(spacing > 0.0)) throw InvalidArgument("ULA spacing must be positive");
  require_unit(axis, "ULA axis");
  std::vector<Point3> p;
  p.reserve(n);
  const double mid = (static_cast<double>(n) - 1.0) / 2.0;
  for (std::size_t k = 0; k < n; ++k) {
    p.push_back(center + (static_cast<double>(k) - mid) * spacing * axis);
  }
  return ArrayGeometry(std::move(p), {n, 1});
}

ArrayGeometry build_ura(std::size_t ny, std::size_t nx, double dy, double dx, const Point3& axis_y,
                        const Point3& axis_x, const Point3& center) {
  if (ny == 0 || nx == 0) throw InvalidArgument("URA needs N_y, N_x >= 1");
  if (!(dy > 0.0) || !(dx > 0.0)) throw InvalidArgument("URA spacings must be positive");
  require_unit(axis_y, "URA y axis");
  require_unit(axis_x, "URA x axis");
  if (std::abs(axis_y.dot(axis_x)) > kAxisTol) throw InvalidArgument("URA axes must be orthogonal");

  std::vector<Point3> p;
  p.reserve(ny * nx);
  const double my = (static_cast<double>(ny) - 1.0) / 2.0;
  const double mx = (static_cast<double>(nx) - 1.0) / 2.0;
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      p.push_back(center + (static_cast<double>(iy) - my) * dy * axis_y +
                  (static_cast<double>(ix) - mx) * dx * axis_x);
    }
  }
  return ArrayGeometry(std::move(p), {ny, nx});
}

double optimal_spacing(double distance, double wavelength, std::size_t n_dim) {
  if (!(distance > 0.0) || !(wavelength > 0.0) || n_dim == 0) {
    throw InvalidArgument("optimal_spacing needs positive R, lambda and N");
  }
  return std::sqrt(wavelength * distance / static_cast<double>(n_dim));
}

void LinkConfig::validate() const {
  if (!(distance > 0.0)) throw InvalidArgument("link distance must be positive");
  if (!(wavelength > 0.0)) throw InvalidArgument("wavelength must be positive");
  if (!(symbol_rate > 0.0)) throw InvalidArgument("symbol rate must be positive");
}

LinkConfig symmetric_link(GridShape shape, double distance, double wavelength, double symbol_rate) {
  const Point3 ey = Point3::UnitY();
  const Point3 ez = Point3::UnitZ();
  const double dy = optimal_spacing(distance, wavelength, shape.ny);
  const double dx = optimal_spacing(distance, wavelength, shape.nx);
  ArrayGeometry tx = build_ura(shape.ny, shape.nx, dy, dx, ey, ez, Point3::Zero());
  ArrayGeometry rx = tx.translated(distance * Point3::UnitX());
  LinkConfig link{std::move(tx), std::move(rx), distance, wavelength, symbol_rate};
  link.validate();
  return link;
}

Eigen::MatrixXd pairwise_distances(const LinkConfig& link) {
  link.validate();
  const auto& rx = link.rx.positions();
  const auto& tx = link.tx.positions();
  Eigen::MatrixXd r(static_cast<Eigen::Index>(rx.size()), static_cast<Eigen::Index>(tx.size()));
  for (std::size_t m = 0; m < rx.size(); ++m) {
    for (std::size_t n = 0; n < tx.size(); ++n) {
      r(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) = (rx[m] - tx[n]).norm();
    }
  }
  return r;
}

ArrayGeometry perturb_positions(const ArrayGeometry& g, double sigma, RandomStream& rng) {
  if (sigma < 0.0 || std::isnan(sigma)) throw InvalidArgument("sigma_pos must be non-negative");
  std::vector<Point3> p = g.positions();
  if (sigma == 0.0) return ArrayGeometry(std::move(p), g.shape());
  for (auto& q : p) {
    for (int c = 0; c < 3; ++c) q[c] += rng.normal(0.0, sigma);
  }
  return ArrayGeometry(std::move(p), g.shape());
}

}  // namespace losmimo
