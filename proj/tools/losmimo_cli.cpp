// SPDX-License-Identifier: Apache-2.0
//
// losmimo: Monte-Carlo harness for structured LOS MIMO channel and
// frequency-offset estimation.
//
//   losmimo presets [--preset NAME]
//   losmimo crb      (--preset NAME | --config FILE) [--out FILE]
//   losmimo simulate (--preset NAME | --config FILE) --snr DB --pilots P [--antennas N] ...
//   losmimo sweep    (--preset NAME | --config FILE) [--out FILE] [--seed S] [--trials T] [--threads K]
//
// When --out is absent the output path comes from the config's output.path,
// then from $LOSMIMO_OUTPUT_DIR/<experiment>.csv.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "losmimo/config.hpp"
#include "losmimo/csv.hpp"
#include "losmimo/errors.hpp"
#include "losmimo/harness.hpp"

namespace {

using namespace losmimo;

struct Source {
  std::string preset;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> threads;
};

void add_source(CLI::App* cmd, Source& s) {
  auto* p = cmd->add_option("--preset", s.preset, "Preset experiment (fig2, fig3, fig4)");
  auto* c = cmd->add_option("--config", s.config, "JSON configuration file")->check(CLI::ExistingFile);
  p->excludes(c);
  cmd->add_option("--out", s.out, "Output CSV path");
}

void add_overrides(CLI::App* cmd, Source& s) {
  cmd->add_option("--seed", s.seed, "Master seed");
  cmd->add_option("--trials", s.trials, "Monte-Carlo trials per grid point");
  cmd->add_option("--threads", s.threads, "Worker threads (0 = all cores)");
}

ExperimentConfig load(const Source& s) {
  ExperimentConfig cfg;
  if (!s.config.empty()) {
    std::ifstream f(s.config);
    if (!f) throw Error("cannot read '" + s.config + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    cfg = parse_config(ss.str());
  } else if (!s.preset.empty()) {
    cfg = preset_config(s.preset);
  } else {
    throw ConfigError("one of --preset or --config is required");
  }
  if (s.seed) cfg.seed = *s.seed;
  if (s.trials) cfg.trials = *s.trials;
  if (s.threads) cfg.threads = *s.threads;
  cfg.validate();
  return cfg;
}

std::optional<std::string> output_path(const Source& s, const ExperimentConfig& cfg, const std::string& suffix,
                                       bool required) {
  if (!s.out.empty()) return s.out;
  if (!cfg.output.empty()) return cfg.output;
  const std::string name = to_string(cfg.kind) + suffix + ".csv";
  if (const char* dir = std::getenv("LOSMIMO_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / name).string();
  }
  if (required) return name;
  return std::nullopt;
}

void print_table(const std::vector<MseRecord>& records) {
  fmt::print("{:<8} {:<24} {:>7} {:>4} {:>4} {:>14} {:>14} {:>12}\n", "param", "estimator", "snr_db", "N", "P", "mse",
             "crb", "std_err");
  for (const auto& r : records) {
    fmt::print("{:<8} {:<24} {:>7.2f} {:>4} {:>4} {:>14.6e} {:>14.6e} {:>12.3e}\n", to_string(r.parameter),
               r.estimator, r.snr_db, r.n_antennas, r.p_pilots, r.mse, r.crb, r.mc_std_error);
  }
}

void write(const std::vector<MseRecord>& records, const std::string& path) {
  emit_csv(records, path);
  std::cerr << fmt::format("wrote {} records to {}\n", records.size(), path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structured LOS MIMO channel and frequency-offset estimation harness"};
  app.require_subcommand(1);

  std::string preset_name;
  auto* presets = app.add_subcommand("presets", "List presets or print one as a config document");
  presets->add_option("--preset", preset_name, "Preset to print");

  Source crb_src;
  auto* crb = app.add_subcommand("crb", "Evaluate the Cramer-Rao bounds of an experiment grid");
  add_source(crb, crb_src);

  Source sim_src;
  double sim_snr = 0.0;
  std::string sim_pilots;
  std::size_t sim_antennas = 0;
  auto* simulate = app.add_subcommand("simulate", "Run one operating point and print a summary");
  add_source(simulate, sim_src);
  add_overrides(simulate, sim_src);
  simulate->add_option("--snr", sim_snr, "SNR in dB")->required();
  simulate->add_option("--pilots", sim_pilots, "Pilot count (integer, N or N/k)")->required();
  simulate->add_option("--antennas", sim_antennas, "ULA size for antenna sweeps");

  Source sweep_src;
  auto* sweep = app.add_subcommand("sweep", "Run the full experiment grid and write CSV");
  add_source(sweep, sweep_src);
  add_overrides(sweep, sweep_src);

  CLI11_PARSE(app, argc, argv);

  try {
    if (presets->parsed()) {
      if (preset_name.empty()) {
        for (const auto& n : preset_names()) fmt::print("{}\n", n);
      } else {
        fmt::print("{}", render_config(preset_config(preset_name)));
      }
      return 0;
    }
    if (crb->parsed()) {
      const ExperimentConfig cfg = load(crb_src);
      const auto records = crb_records(cfg);
      print_table(records);
      if (auto path = output_path(crb_src, cfg, "-crb", false)) write(records, *path);
      return 0;
    }
    if (simulate->parsed()) {
      ExperimentConfig cfg = load(sim_src);
      cfg.snr_db = {sim_snr};
      cfg.pilots = {parse_pilot_spec(sim_pilots)};
      if (sim_antennas > 0) cfg.antennas = {sim_antennas};
      cfg.sigma_pos = {cfg.sigma_pos.front()};
      cfg.validate();
      const auto records = run_experiment(cfg);
      print_table(records);
      if (auto path = output_path(sim_src, cfg, "-simulate", false)) write(records, *path);
      return 0;
    }
    if (sweep->parsed()) {
      const ExperimentConfig cfg = load(sweep_src);
      const auto records = run_experiment(cfg);
      write(records, *output_path(sweep_src, cfg, "", true));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
