// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "losmimo/config.hpp"
#include "losmimo/csv.hpp"
#include "losmimo/errors.hpp"

using namespace losmimo;

namespace {

std::string error_of(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

MseRecord sample_record() {
  return {"fig3", Parameter::Omega, "consecutive", 15.0, 6, 4, 0.0032122131234567, 0.00123, 1.5e-5, 10000, 7};
}

}  // namespace

TEST_CASE("minimal preset stanza") {
  const auto c = parse_config(R"({"experiment": {"kind": "fig2"}})");
  CHECK(c.shape.ny == 3);
  CHECK(c.shape.nx == 3);
  CHECK(c.shape.size() == 9);
  CHECK(c == preset_config("fig2"));
}

TEST_CASE("overrides apply on top of the preset") {
  const auto c = parse_config(R"({"experiment": {"kind": "fig4", "trials": 50, "seed": 99},
                                  "sweep": {"pilots": ["N"], "pairing": "time"},
                                  "geometry": {"sigma_pos": [0.001]}})");
  CHECK(c.trials == 50);
  CHECK(c.seed == 99);
  CHECK(c.pilots == std::vector<PilotSpec>{PilotSpec::fraction(1)});
  CHECK(c.sigma_pos == std::vector<double>{0.001});
}

TEST_CASE("empty documents list the required keys") {
  CHECK(error_of("").find("experiment.kind") != std::string::npos);
  CHECK(error_of("  \n").find("experiment.kind") != std::string::npos);
  CHECK(error_of("{}").find("experiment.kind") != std::string::npos);
  const std::string custom = error_of(R"({"experiment": {"kind": "custom"}})");
  CHECK(custom.find("sweep.snr_db") != std::string::npos);
  CHECK(custom.find("sweep.pilots") != std::string::npos);
  CHECK(custom.find("sweep.estimators") != std::string::npos);
}

TEST_CASE("validation errors") {
  CHECK(error_of(R"({"experiment": {"kind": "fig2", "trials": 0}})").find("trials") != std::string::npos);
  CHECK(error_of(R"({"experiment": {"kind": "fig2", "trials": -4}})").find("trials") != std::string::npos);
  CHECK(error_of(R"({"experiment": {"kind": "fig2", "colour": 1}})").find("experiment.colour") != std::string::npos);
  CHECK(error_of(R"({"experiment": {"kind": "fig2"}, "plot": {}})").find("plot") != std::string::npos);
  CHECK(error_of(R"({"experiment": {"kind": "fig9"}})").find("fig9") != std::string::npos);
  CHECK(error_of(R"({"experiment": {"kind": "fig2"}, "sweep": {"estimators": ["ml"]}})").find("ml") != std::string::npos);
  CHECK(error_of(R"({"experiment": {"kind": "fig2"}, "sweep": {"snr_db": "high"}})").find("sweep.snr_db") !=
        std::string::npos);
  CHECK(error_of(R"({"experiment": {"kind": "fig3"}, "sweep": {"pilots": ["N/0"]}})").find("pilots") !=
        std::string::npos);
  CHECK_FALSE(error_of("{\"experiment\": {\n\"kind\": \"fig2\",,}}").empty());
  CHECK(error_of("{\"experiment\": {\n\"kind\": \"fig2\",,}}").find("line 2") != std::string::npos);
}

TEST_CASE("custom experiments") {
  const auto c = parse_config(R"({"experiment": {"kind": "custom", "trials": 10},
                                  "geometry": {"ny": 2, "nx": 4},
                                  "oscillator": {"omega_variance": 0.1},
                                  "sweep": {"snr_db": [5, 10], "pilots": [2, 4], "estimators": ["consecutive"],
                                            "pairing": "antenna"}})");
  CHECK(c.kind == ExperimentKind::Custom);
  CHECK(c.shape == GridShape{2, 4});
  CHECK(c.pairing == PairingScheme::AntennaPairs);
  const auto rs = run_experiment(c);
  CHECK(rs.size() == 2 * 2 * 2 + 2 + 2 * 2);
}

TEST_CASE("render and parse round-trip") {
  for (const auto& name : preset_names()) {
    const auto c = preset_config(name);
    CAPTURE(name);
    CHECK(parse_config(render_config(c)) == c);
  }
  auto c = preset_config("fig4");
  c.kind = ExperimentKind::Custom;
  c.seed = 0xFFFFFFFFFFFFFFFFull;
  c.threads = 0;
  c.pairing = PairingScheme::AntennaPairs;
  c.pilots = {PilotSpec::fraction(2), PilotSpec::absolute(4), PilotSpec::fraction(1)};
  c.snr_db = {-3.5, 0.1, 17.25};
  c.omega_variance = 0.123456789012345;
  c.noiseless = true;
  c.crb_rows = false;
  c.output = "out/run.csv";
  CHECK(parse_config(render_config(c)) == c);
}

TEST_CASE("pilot specifications") {
  CHECK(parse_pilot_spec("6") == PilotSpec::absolute(6));
  CHECK(parse_pilot_spec("N") == PilotSpec::fraction(1));
  CHECK(parse_pilot_spec("N/2").resolve(8) == 4);
  CHECK_THROWS_AS(parse_pilot_spec("M/2"), ConfigError);
  CHECK_THROWS_AS(parse_pilot_spec("N/0"), ConfigError);
  CHECK_THROWS_AS(parse_pilot_spec("N/3").resolve(8), ConfigError);
}

TEST_CASE("csv format") {
  const std::string text = format_csv({sample_record()});
  CHECK(text.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.back() == '\n');
  CHECK(text.find("fig3,omega,consecutive,15,6,4,0.003212213123,0.00123,1.5e-05,10000,7\n") != std::string::npos);
}

TEST_CASE("emit_csv writes header plus one row per record") {
  const auto dir = std::filesystem::temp_directory_path() / "losmimo_test_config";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "one.csv").string();
  emit_csv({sample_record()}, path);
  const std::string text = slurp(path);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);

  auto cfg = preset_config("fig3");
  cfg.trials = 20;
  cfg.snr_db = {10.0};
  emit_csv(run_experiment(cfg), (dir / "a.csv").string());
  emit_csv(run_experiment(cfg), (dir / "b.csv").string());
  CHECK(slurp((dir / "a.csv").string()) == slurp((dir / "b.csv").string()));

  CHECK_THROWS_AS(emit_csv({}, path), Error);
  CHECK_THROWS_AS(emit_csv({sample_record()}, (dir / "missing" / "x.csv").string()), Error);
}
