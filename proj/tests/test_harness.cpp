// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <map>

#include "losmimo/csv.hpp"
#include "losmimo/errors.hpp"
#include "losmimo/harness.hpp"

using namespace losmimo;

namespace {

const MseRecord& find(const std::vector<MseRecord>& rs, Parameter par, const std::string& est, double snr,
                      std::size_t n, std::size_t p) {
  for (const auto& r : rs) {
    if (r.parameter == par && r.estimator == est && r.snr_db == snr && r.n_antennas == n && r.p_pilots == p) return r;
  }
  throw std::runtime_error("record not found: " + est);
}

}  // namespace

TEST_CASE("channel_mse and omega_mse conventions") {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Ones(2, 2);
  CHECK(channel_mse(a, a) == 0.0);
  Eigen::MatrixXcd one(1, 1), zero = Eigen::MatrixXcd::Zero(1, 1);
  one(0, 0) = {1.0, 1.0};
  CHECK(channel_mse(one, zero) == doctest::Approx(1.0));
  CHECK_THROWS_AS(channel_mse(a, zero), ShapeMismatch);
  CHECK(omega_mse(0.3, 0.3) == 0.0);
  CHECK(omega_mse(0.31, 0.3) == doctest::Approx(1e-4));
}

TEST_CASE("presets follow the figure captions") {
  const auto f2 = preset_config("fig2");
  CHECK(f2.shape == GridShape{3, 3});
  CHECK(f2.snr_db.size() == 11);
  CHECK(f2.snr_db.back() == 30.0);
  const auto f3 = preset_config("fig3");
  CHECK(f3.shape == GridShape{6, 1});
  CHECK(f3.omega_variance == 0.3);
  const auto f4 = preset_config("fig4");
  CHECK(f4.antennas.size() == 8);
  CHECK(f4.antennas.back() == 32);
  CHECK(f4.sigma_pos.back() == doctest::Approx(0.005 / 20));
  CHECK_THROWS_AS(preset_config("fig7"), ConfigError);
  CHECK_THROWS_AS(preset_config("custom"), ConfigError);
}

TEST_CASE("fig2 grid yields five estimator curves plus bound rows") {
  auto cfg = preset_config("fig2");
  cfg.trials = 3;
  const auto rs = run_experiment(cfg);
  std::map<std::string, int> per;
  for (const auto& r : rs) ++per[r.estimator + "/" + std::to_string(r.p_pilots)];
  CHECK(per.size() == 6);
  CHECK(per["ls/9"] == 11);
  CHECK(per["toeplitz/1"] == 11);
  CHECK(per["toeplitz/9"] == 11);
  CHECK(per["crb/9"] == 11);
  CHECK(rs.size() == 66);
}

TEST_CASE("noiseless single-trial runs give zero error") {
  for (const char* name : {"fig2", "fig3", "fig4"}) {
    auto cfg = preset_config(name);
    cfg.trials = 1;
    cfg.noiseless = true;
    cfg.sigma_pos = {0.0};
    for (const auto& r : run_experiment(cfg)) {
      CAPTURE(name);
      CAPTURE(r.estimator);
      CHECK(r.mse <= 1e-20);
      CHECK(r.mc_std_error == 0.0);
    }
  }
}

TEST_CASE("records are reproducible across runs and thread counts") {
  auto cfg = preset_config("fig3");
  cfg.trials = 200;
  cfg.snr_db = {0.0, 15.0};
  cfg.threads = 1;
  const std::string a = format_csv(run_experiment(cfg));
  const std::string b = format_csv(run_experiment(cfg));
  cfg.threads = 3;
  const std::string c = format_csv(run_experiment(cfg));
  CHECK(a == b);
  CHECK(a == c);
  cfg.seed = 2;
  CHECK(format_csv(run_experiment(cfg)) != a);
}

TEST_CASE("measured errors respect the attached bounds") {
  for (const char* name : {"fig2", "fig3", "fig4"}) {
    auto cfg = preset_config(name);
    cfg.trials = 2000;
    cfg.sigma_pos = {0.0};
    if (cfg.kind == ExperimentKind::Fig4) cfg.antennas = {4, 8, 16};
    else cfg.snr_db = {0.0, 15.0, 30.0};
    for (const auto& r : run_experiment(cfg)) {
      if (r.estimator == "crb") continue;
      CAPTURE(name);
      CAPTURE(r.estimator);
      CAPTURE(r.snr_db);
      CAPTURE(r.p_pilots);
      CHECK(r.crb > 0.0);
      CHECK(r.mc_std_error > 0.0);
      CHECK(r.mse + 3.0 * r.mc_std_error >= r.crb);
    }
  }
}

TEST_CASE("more antennas improve the offset estimate") {
  auto cfg = preset_config("fig4");
  cfg.trials = 2000;
  cfg.antennas = {4, 8, 16, 32};
  cfg.pilots = {PilotSpec::fraction(1)};
  cfg.sigma_pos = {0.0};
  const auto rs = run_experiment(cfg);
  double prev_mse = 1e9, prev_se = 0.0;
  for (std::size_t n : cfg.antennas) {
    const auto& r = find(rs, Parameter::Omega, "consecutive", 20.0, n, n);
    CAPTURE(n);
    CHECK(r.mse <= prev_mse + 2.0 * std::hypot(r.mc_std_error, prev_se));
    prev_mse = r.mse;
    prev_se = r.mc_std_error;
  }
}

TEST_CASE("position errors create an error floor") {
  auto cfg = preset_config("fig4");
  cfg.trials = 500;
  cfg.antennas = {32};
  cfg.pilots = {PilotSpec::fraction(1)};
  const auto rs = run_experiment(cfg);
  const double ideal = find(rs, Parameter::Omega, "consecutive", 20.0, 32, 32).mse;
  const double impaired = find(rs, Parameter::Omega, "consecutive-sigma0.00025", 20.0, 32, 32).mse;
  CHECK(impaired >= 3.0 * ideal);
}

TEST_CASE("bounds attached to records") {
  CHECK(channel_crb(9, 1.0) == doctest::Approx(1.0 / 18.0));
  CHECK(channel_crb(6, 0.5) == doctest::Approx(0.5 / 12.0));
  const double w = omega_crb({6, 1}, 6, 1.0);
  CHECK(std::isfinite(w));
  CHECK(omega_crb({6, 1}, 6, 2.0) == doctest::Approx(2.0 * w));
  CHECK(std::isnan(omega_crb({6, 1}, 1, 1.0)));
}

TEST_CASE("run_experiment rejects invalid configurations") {
  auto cfg = preset_config("fig3");
  cfg.trials = 0;
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
  cfg = preset_config("fig3");
  cfg.pilots = {PilotSpec::absolute(3)};
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
  cfg.pairing = PairingScheme::AntennaPairs;
  cfg.trials = 2;
  CHECK_NOTHROW(run_experiment(cfg));
  cfg = preset_config("fig2");
  cfg.pilots = {PilotSpec::absolute(3)};
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
}
