// SPDX-License-Identifier: Apache-2.0
#include "losmimo/crb.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include <fmt/format.h>

#include "losmimo/errors.hpp"

namespace losmimo {

namespace {

using cd = std::complex<double>;
const cd kJ{0.0, 1.0};

std::vector<std::string> channel_names(std::size_t n, const std::string& stem) {
  std::vector<std::string> names;
  for (std::size_t k = 0; k < n; ++k) names.push_back(fmt::format("Re {}[{}]", stem, k));
  for (std::size_t k = 0; k < n; ++k) names.push_back(fmt::format("Im {}[{}]", stem, k));
  return names;
}

// Inverse of a symmetric positive definite information matrix.
Eigen::MatrixXd invert_information(const Eigen::MatrixXd& info, const std::vector<std::string>& names,
                                   double& condition) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(info);
  const auto& ev = eig.eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  const double tol = 64.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(info.rows()) * top;
  if (top == 0.0 || ev(0) <= tol) {
    std::vector<std::string> bad;
    for (Eigen::Index k = 0; k < ev.size() && ev(k) <= tol; ++k) {
      const auto v = eig.eigenvectors().col(k);
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        const auto& nm = names[static_cast<std::size_t>(i)];
        if (std::abs(v(i)) > 0.1 && std::find(bad.begin(), bad.end(), nm) == bad.end()) bad.push_back(nm);
      }
    }
    std::string list;
    for (const auto& b : bad) list += (list.empty() ? "" : ", ") + b;
    throw SingularMatrix("Fisher information is singular; unidentifiable parameters: " + list, bad);
  }
  condition = ev(ev.size() - 1) / ev(0);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(info.rows(), info.cols());
  Eigen::MatrixXd inv = info.ldlt().solve(id);
  return (inv + inv.transpose()) / 2.0;
}

// Fisher information of a complex Gaussian mean with Jacobian J, unit noise.
Eigen::MatrixXd real_information(const Eigen::MatrixXcd& jac) {
  return 2.0 * (jac.adjoint() * jac).real();
}

Eigen::MatrixXcd omega_weighted(const TrainingMatrix& x, const Eigen::VectorXd& omega) {
  Eigen::MatrixXcd xw = x.x;
  for (Eigen::Index p = 0; p < xw.rows(); ++p) {
    for (Eigen::Index n = 0; n < xw.cols(); ++n) {
      xw(p, n) *= std::polar(1.0, static_cast<double>(p + 1) * omega(n));
    }
  }
  return xw;
}

// D = diag(1..P) * X_omega * diag(h).
Eigen::MatrixXcd offset_derivative(const Eigen::MatrixXcd& xw, const Eigen::VectorXcd& h) {
  Eigen::MatrixXcd d = xw * h.asDiagonal();
  for (Eigen::Index p = 0; p < d.rows(); ++p) d.row(p) *= static_cast<double>(p + 1);
  return d;
}

CrbReport finish(const Eigen::MatrixXd& info_unit, std::vector<std::string> names, std::size_t n_channel,
                 std::size_t n_omega, double noise_variance) {
  if (!(noise_variance > 0.0)) throw InvalidArgument("noise variance must be positive for a CRB");
  CrbReport r;
  // info_unit = 2 Re(J^H J), so this is (sigma^2 / 2) [Re(J^H J)]^{-1}.
  r.covariance = noise_variance * invert_information(info_unit, names, r.condition);
  const auto nc = static_cast<Eigen::Index>(n_channel);
  r.channel_real = r.covariance.diagonal().head(nc);
  r.channel_imag = r.covariance.diagonal().segment(nc, nc);
  if (n_omega > 0) r.omega = r.covariance.diagonal().tail(static_cast<Eigen::Index>(n_omega));
  r.names = std::move(names);
  return r;
}

}  // namespace

double CrbReport::channel_bound() const {
  if (channel_real.size() == 0) return 0.0;
  return (channel_real.mean() + channel_imag.mean()) / 2.0;
}

double CrbReport::omega_bound() const {
  if (!has_omega()) throw InvalidArgument("report carries no frequency-offset bound");
  return omega.mean();
}

CrbReport crb_no_offset(const TrainingMatrix& x, double noise_variance) {
  const auto n = static_cast<std::size_t>(x.x.cols());
  const Eigen::MatrixXcd a = x.x.adjoint() * x.x;
  const auto nn = a.rows();
  Eigen::MatrixXd block(2 * nn, 2 * nn);
  block << a.real(), -a.imag(), a.imag(), a.real();
  try {
    return finish(2.0 * block, channel_names(n, "h"), n, 0, noise_variance);
  } catch (const SingularMatrix& e) {
    throw SingularMatrix(std::string("X^H X is singular: ") + e.what(), e.parameters());
  }
}

Eigen::MatrixXd fisher_with_offset(const TrainingMatrix& x, const Eigen::VectorXd& omega,
                                   const Eigen::VectorXcd& h_phi, double noise_variance) {
  const auto n = x.x.cols();
  if (omega.size() != n || h_phi.size() != n) throw ShapeMismatch("omega and h must have N entries");
  if (!(noise_variance > 0.0)) throw InvalidArgument("noise variance must be positive");
  const Eigen::MatrixXcd xw = omega_weighted(x, omega);
  const Eigen::MatrixXcd d = offset_derivative(xw, h_phi);
  Eigen::MatrixXcd jac(x.x.rows(), 3 * n);
  jac << xw, kJ * xw, kJ * d;
  return real_information(jac) / noise_variance;
}

CrbReport crb_with_offset(const TrainingMatrix& x, const Eigen::VectorXd& omega,
                          const Eigen::VectorXcd& h_phi, double noise_variance) {
  const auto n = static_cast<std::size_t>(x.x.cols());
  auto names = channel_names(n, "h");
  for (std::size_t k = 0; k < n; ++k) names.push_back(fmt::format("omega[{}]", k));
  const Eigen::MatrixXd info = fisher_with_offset(x, omega, h_phi, 1.0);
  return finish(info, std::move(names), n, n, noise_variance);
}

CrbReport crb_with_common_offset(const TrainingMatrix& x, double omega, const Eigen::VectorXcd& h_phi,
                                 double noise_variance) {
  const auto n = x.x.cols();
  if (h_phi.size() != n) throw ShapeMismatch("h must have N entries");
  const Eigen::MatrixXcd xw = omega_weighted(x, Eigen::VectorXd::Constant(n, omega));
  const Eigen::MatrixXcd d = offset_derivative(xw, h_phi);
  Eigen::MatrixXcd jac(x.x.rows(), 2 * n + 1);
  jac << xw, kJ * xw, kJ * d.rowwise().sum();
  auto names = channel_names(static_cast<std::size_t>(n), "h");
  names.emplace_back("omega");
  return finish(real_information(jac), std::move(names), static_cast<std::size_t>(n), 1, noise_variance);
}

CrbReport crb_structured_system(const StructureMap& map, const TrainingMatrix& x, double omega,
                                const Eigen::VectorXcd& class_values, double noise_variance) {
  const auto m_count = static_cast<Eigen::Index>(map.antennas());
  const auto k_count = static_cast<Eigen::Index>(map.class_count());
  if (x.x.cols() != m_count) throw ShapeMismatch("training width must equal the array size");
  if (class_values.size() != k_count) throw ShapeMismatch("need one value per structure class");
  const Eigen::Index P = x.x.rows();

  // Observation (p, m) stacked as row m * P + p.
  Eigen::MatrixXcd jac = Eigen::MatrixXcd::Zero(P * m_count, 2 * k_count + 1);
  for (Eigen::Index m = 0; m < m_count; ++m) {
    for (Eigen::Index p = 0; p < P; ++p) {
      const cd rot = std::polar(1.0, static_cast<double>(p + 1) * omega);
      cd mean = 0.0;
      for (Eigen::Index n = 0; n < m_count; ++n) {
        const auto k = static_cast<Eigen::Index>(map.class_of(static_cast<std::size_t>(m), static_cast<std::size_t>(n)));
        const cd g = rot * x.x(p, n);
        jac(m * P + p, k) += g;
        jac(m * P + p, k_count + k) += kJ * g;
        mean += g * class_values(k);
      }
      jac(m * P + p, 2 * k_count) = kJ * static_cast<double>(p + 1) * mean;
    }
  }
  std::vector<std::string> names;
  for (Eigen::Index k = 0; k < k_count; ++k) {
    const auto [dy, dx] = map.offsets(static_cast<std::size_t>(k));
    names.push_back(fmt::format("Re g({},{})", dy, dx));
  }
  for (Eigen::Index k = 0; k < k_count; ++k) {
    const auto [dy, dx] = map.offsets(static_cast<std::size_t>(k));
    names.push_back(fmt::format("Im g({},{})", dy, dx));
  }
  names.emplace_back("omega");
  CrbReport cls = finish(real_information(jac), names, static_cast<std::size_t>(k_count), 1, noise_variance);

  // Expand class bounds to one entry per (m, n).
  CrbReport r = cls;
  r.channel_real.resize(m_count * m_count);
  r.channel_imag.resize(m_count * m_count);
  for (Eigen::Index m = 0; m < m_count; ++m) {
    for (Eigen::Index n = 0; n < m_count; ++n) {
      const auto k = static_cast<Eigen::Index>(map.class_of(static_cast<std::size_t>(m), static_cast<std::size_t>(n)));
      r.channel_real(m * m_count + n) = cls.channel_real(k);
      r.channel_imag(m * m_count + n) = cls.channel_imag(k);
    }
  }
  return r;
}

CrbReport system_scale(CrbReport report, std::size_t m) {
  if (m == 0) throw InvalidArgument("system scaling needs M >= 1");
  const double s = 1.0 / static_cast<double>(m);
  report.channel_real *= s;
  report.channel_imag *= s;
  report.omega *= s;
  report.covariance *= s;
  return report;
}

bool is_psd(const Eigen::MatrixXd& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(a.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > rel_tol * scale) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff() >= -rel_tol * scale;
}

}  // namespace losmimo
