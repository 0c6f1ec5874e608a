// SPDX-License-Identifier: Apache-2.0
#include "losmimo/channel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "losmimo/errors.hpp"

namespace losmimo {

namespace {

using cd = std::complex<double>;

Eigen::MatrixXcd phase_matrix(const Eigen::MatrixXd& r, const Eigen::VectorXd& lambda) {
  Eigen::MatrixXcd h(r.rows(), r.cols());
  for (Eigen::Index n = 0; n < r.cols(); ++n) {
    if (!(lambda(n) > 0.0)) throw InvalidArgument("wavelength must be positive");
    for (Eigen::Index m = 0; m < r.rows(); ++m) {
      if (!(r(m, n) > 0.0)) throw InvalidArgument("distances must be positive");
      h(m, n) = std::polar(1.0, -2.0 * std::numbers::pi * r(m, n) / lambda(n));
    }
  }
  return h;
}

}  // namespace

void validate(const OscillatorModel& osc) {
  auto check = [](double w, double p) {
    if (!(std::abs(w) < std::numbers::pi)) throw InvalidArgument("|omega| must be below pi");
    if (!(p >= 0.0 && p < 2.0 * std::numbers::pi)) throw InvalidArgument("phi must lie in [0, 2pi)");
  };
  if (const auto* s = std::get_if<SingleOscillator>(&osc)) {
    check(s->omega, s->phi);
    return;
  }
  const auto& pp = std::get<PerPairOscillator>(osc);
  if (pp.omega.rows() != pp.phi.rows() || pp.omega.cols() != pp.phi.cols()) {
    throw ShapeMismatch("per-pair omega and phi shapes differ");
  }
  for (Eigen::Index i = 0; i < pp.omega.size(); ++i) check(pp.omega(i), pp.phi(i));
}

double omega_at(const OscillatorModel& osc, std::size_t m, std::size_t n) {
  if (const auto* s = std::get_if<SingleOscillator>(&osc)) return s->omega;
  return std::get<PerPairOscillator>(osc).omega(static_cast<Eigen::Index>(m),
                                                 static_cast<Eigen::Index>(n));
}

double phi_at(const OscillatorModel& osc, std::size_t m, std::size_t n) {
  if (const auto* s = std::get_if<SingleOscillator>(&osc)) return s->phi;
  return std::get<PerPairOscillator>(osc).phi(static_cast<Eigen::Index>(m),
                                               static_cast<Eigen::Index>(n));
}

ChannelMatrix los_channel(const Eigen::MatrixXd& distances, double wavelength) {
  return los_channel(distances, Eigen::VectorXd::Constant(distances.cols(), wavelength));
}

ChannelMatrix los_channel(const Eigen::MatrixXd& distances, const Eigen::VectorXd& wavelengths) {
  if (wavelengths.size() != distances.cols()) {
    throw ShapeMismatch("need one wavelength per transmit antenna");
  }
  ChannelMatrix ch;
  ch.h = phase_matrix(distances, wavelengths);
  ch.rx_shape = {static_cast<std::size_t>(distances.rows()), 1};
  ch.tx_shape = {static_cast<std::size_t>(distances.cols()), 1};
  return ch;
}

ChannelMatrix los_channel(const LinkConfig& link) {
  ChannelMatrix ch = los_channel(pairwise_distances(link), link.wavelength);
  ch.rx_shape = link.rx.shape();
  ch.tx_shape = link.tx.shape();
  return ch;
}

JointChannel joint_channel(const ChannelMatrix& ch, const OscillatorModel& osc) {
  if (const auto* s = std::get_if<SingleOscillator>(&osc)) {
    return {ch.h * std::polar(1.0, s->phi)};
  }
  const auto& pp = std::get<PerPairOscillator>(osc);
  if (pp.phi.rows() != ch.h.rows() || pp.phi.cols() != ch.h.cols()) {
    throw ShapeMismatch("per-pair phase matrix must be M x N");
  }
  Eigen::MatrixXcd out(ch.h.rows(), ch.h.cols());
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = ch.h(i) * std::polar(1.0, pp.phi(i));
  return {out};
}

StructureMap::StructureMap(GridShape shape) : shape_(shape) {
  if (shape_.ny == 0 || shape_.nx == 0) throw InvalidArgument("structure map needs N_y, N_x >= 1");
}

std::size_t StructureMap::class_of(std::size_t m, std::size_t n) const {
  const std::size_t nx = shape_.nx;
  const std::size_t my = m / nx, mx = m % nx;
  const std::size_t ny = n / nx, nxi = n % nx;
  const std::size_t dy = my > ny ? my - ny : ny - my;
  const std::size_t dx = mx > nxi ? mx - nxi : nxi - mx;
  return dy * nx + dx;
}

std::pair<std::size_t, std::size_t> StructureMap::offsets(std::size_t class_id) const {
  return {class_id / shape_.nx, class_id % shape_.nx};
}

std::vector<std::size_t> StructureMap::class_sizes() const {
  std::vector<std::size_t> sizes(class_count(), 0);
  const std::size_t n = antennas();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) ++sizes[class_of(a, b)];
  }
  return sizes;
}

StructureMap structure_map(std::size_t ny, std::size_t nx) { return StructureMap({ny, nx}); }

double condition_number(const Eigen::MatrixXcd& h) {
  if (h.size() == 0) throw InvalidArgument("condition number of an empty matrix");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h);
  const auto& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(s.size() - 1);
  if (smax == 0.0) throw InvalidArgument("condition number of a zero matrix");
  const double tol = std::numeric_limits<double>::epsilon() * static_cast<double>(std::max(h.rows(), h.cols())) * smax;
  if (smin <= tol) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

double max_class_spread(const Eigen::MatrixXcd& h, const StructureMap& map) {
  const auto n = static_cast<Eigen::Index>(map.antennas());
  if (h.rows() != n || h.cols() != n) throw ShapeMismatch("channel does not match structure map");
  std::vector<std::vector<cd>> members(map.class_count());
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index k = 0; k < n; ++k) {
      members[map.class_of(static_cast<std::size_t>(m), static_cast<std::size_t>(k))].push_back(h(m, k));
    }
  }
  double spread = 0.0;
  for (const auto& c : members) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      for (std::size_t j = i + 1; j < c.size(); ++j) spread = std::max(spread, std::abs(c[i] - c[j]));
    }
  }
  return spread;
}

}  // namespace losmimo
