// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "losmimo/channel.hpp"
#include "losmimo/errors.hpp"
#include "losmimo/signal.hpp"

using namespace losmimo;
using cd = std::complex<double>;

TEST_CASE("shifted-identity training") {
  CHECK((training_shifted_identity(3, 3).x - Eigen::MatrixXcd::Identity(3, 3)).norm() == 0.0);

  const auto x = training_shifted_identity(2, 6);
  CHECK(x.x.rows() == 2);
  CHECK(x.x.cols() == 6);
  CHECK(x.x(0, 0) == cd(1.0));
  CHECK(x.x(1, 1) == cd(1.0));
  CHECK(x.x.cwiseAbs().sum() == doctest::Approx(2.0));

  const auto one = training_shifted_identity(1, 9);
  CHECK(one.x(0, 0) == cd(1.0));
  CHECK(one.x.cwiseAbs().sum() == doctest::Approx(1.0));

  const auto wrap = training_shifted_identity(5, 3);
  CHECK(wrap.x(3, 0) == cd(1.0));
  CHECK(wrap.x(4, 1) == cd(1.0));
}

TEST_CASE("orthogonal training has orthonormal columns") {
  for (auto [p, n] : {std::pair{4, 4}, std::pair{7, 3}, std::pair{9, 9}}) {
    const auto x = training_orthogonal(static_cast<std::size_t>(p), static_cast<std::size_t>(n));
    CHECK((x.x.adjoint() * x.x - Eigen::MatrixXcd::Identity(n, n)).norm() < 1e-13);
  }
  CHECK_THROWS_AS(training_orthogonal(2, 3), InvalidArgument);
}

TEST_CASE("snr_to_noise_variance") {
  CHECK(snr_to_noise_variance(0.0) == 1.0);
  CHECK(snr_to_noise_variance(20.0) == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(snr_to_noise_variance(3.0) == doctest::Approx(0.501187234).epsilon(1e-9));
  CHECK_THROWS_AS(snr_to_noise_variance(INFINITY), InvalidArgument);
}

TEST_CASE("draw_offsets with zero variance") {
  RandomStream rng(3);
  const auto osc = std::get<SingleOscillator>(draw_offsets(OffsetKind::Single, 0.0, rng));
  CHECK(osc.omega == 0.0);
  CHECK(osc.phi >= 0.0);
  CHECK(osc.phi < 2.0 * std::numbers::pi);
  CHECK_THROWS_AS(draw_offsets(OffsetKind::Single, -0.1, rng), InvalidArgument);
}

TEST_CASE("draw_offsets moments and phase uniformity") {
  RandomStream rng(11);
  const int n = 100000;
  std::vector<double> phis;
  phis.reserve(n);
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto osc = std::get<SingleOscillator>(draw_offsets(OffsetKind::Single, 0.3, rng));
    REQUIRE(std::abs(osc.omega) < std::numbers::pi);
    s += osc.omega;
    s2 += osc.omega * osc.omega;
    phis.push_back(osc.phi);
  }
  const double mean = s / n;
  CHECK((s2 / n - mean * mean) == doctest::Approx(0.3).epsilon(0.03));

  // Kolmogorov-Smirnov against U[0, 2pi), 1% critical value 1.628 / sqrt(n).
  std::sort(phis.begin(), phis.end());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    const double f = phis[static_cast<std::size_t>(i)] / (2.0 * std::numbers::pi);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - f)});
  }
  CHECK(d < 1.628 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("per-pair offsets are drawn entrywise") {
  RandomStream rng(5);
  const auto pp = std::get<PerPairOscillator>(draw_offsets(OffsetKind::PerPair, 0.3, rng, 3, 4));
  CHECK(pp.omega.rows() == 3);
  CHECK(pp.omega.cols() == 4);
  CHECK(pp.phi.rows() == 3);
  CHECK(pp.omega(0, 0) != pp.omega(2, 3));
  CHECK_NOTHROW(validate(OscillatorModel{pp}));
  CHECK_THROWS_AS(validate(OscillatorModel{SingleOscillator{3.5, 0.0}}), InvalidArgument);
  CHECK_THROWS_AS(validate(OscillatorModel{SingleOscillator{0.1, 7.0}}), InvalidArgument);
}

TEST_CASE("noiseless synthesis matches the model") {
  const auto ch = los_channel(symmetric_link({3, 1}, 5.0, 0.005));
  RandomStream rng(1);

  const SingleOscillator still{0.0, 0.4};
  const auto hp = joint_channel(ch, still);
  const auto blk = synthesize_rx(hp, still, training_shifted_identity(3, 3), 0.0, rng);
  CHECK((blk.y.transpose() - hp.h).norm() == 0.0);

  const SingleOscillator moving{0.37, 1.0};
  const auto hm = joint_channel(ch, moving);
  const auto b2 = synthesize_rx(hm, moving, training_shifted_identity(3, 3), 0.0, rng);
  for (int m = 0; m < 3; ++m) {
    for (int p = 0; p < 3; ++p) {
      const cd expect = std::polar(1.0, (p + 1) * 0.37) * hm.h(m, p);
      CHECK(std::abs(b2.y(p, m) - expect) < 1e-14);
      CHECK(std::abs(std::abs(b2.y(p, m)) - 1.0) < 1e-14);
    }
  }
}

TEST_CASE("single-oscillator synthesis equals a common rotation of the offset-free output") {
  const auto ch = los_channel(symmetric_link({2, 2}, 5.0, 0.005));
  const auto x = training_orthogonal(6, 4);
  RandomStream rng(2);
  const SingleOscillator osc{-0.8, 2.0};
  const auto hp = joint_channel(ch, osc);
  const auto rotated = synthesize_rx(hp, osc, x, 0.0, rng).y;
  const auto plain = synthesize_rx(hp, SingleOscillator{0.0, 2.0}, x, 0.0, rng).y;
  for (int p = 0; p < 6; ++p) {
    CHECK((rotated.row(p) - std::polar(1.0, (p + 1) * -0.8) * plain.row(p)).norm() < 1e-13);
  }

  // The per-pair path with identical entries agrees with the single path.
  const PerPairOscillator pp{Eigen::MatrixXd::Constant(4, 4, -0.8), Eigen::MatrixXd::Constant(4, 4, 2.0)};
  CHECK((synthesize_rx(hp, pp, x, 0.0, rng).y - rotated).norm() < 1e-12);
}

TEST_CASE("noise is circular with the requested variance") {
  const JointChannel zero{Eigen::MatrixXcd::Zero(10, 10)};
  RandomStream rng(9);
  const auto blk = synthesize_rx(zero, SingleOscillator{}, training_shifted_identity(10000, 10), 1.0, rng);
  const double n = static_cast<double>(blk.y.size());
  const double re2 = blk.y.real().array().square().sum() / n;
  const double im2 = blk.y.imag().array().square().sum() / n;
  const double cross = (blk.y.real().array() * blk.y.imag().array()).sum() / n;
  CHECK((re2 + im2) == doctest::Approx(1.0).epsilon(0.03));
  CHECK(re2 == doctest::Approx(0.5).epsilon(0.03));
  CHECK(im2 == doctest::Approx(0.5).epsilon(0.03));
  CHECK(std::abs(cross) < 0.01);
}

TEST_CASE("synthesize_rx shape checks") {
  RandomStream rng(1);
  const JointChannel h{Eigen::MatrixXcd::Ones(3, 3)};
  CHECK_THROWS_AS(synthesize_rx(h, SingleOscillator{}, training_shifted_identity(2, 4), 0.0, rng), ShapeMismatch);
  const PerPairOscillator pp{Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 2)};
  CHECK_THROWS_AS(synthesize_rx(h, pp, training_shifted_identity(2, 3), 0.0, rng), ShapeMismatch);
}

TEST_CASE("substreams are reproducible and distinct") {
  auto a = RandomStream::substream(42, 3, 7);
  auto b = RandomStream::substream(42, 3, 7);
  auto c = RandomStream::substream(42, 3, 8);
  const double x = a.normal(0, 1);
  CHECK(x == b.normal(0, 1));
  CHECK(x != c.normal(0, 1));
}
