// SPDX-License-Identifier: Apache-2.0
#include "losmimo/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include <fmt/format.h>

#include "losmimo/crb.hpp"
#include "losmimo/errors.hpp"
#include "losmimo/signal.hpp"

namespace losmimo {

namespace {

std::vector<double> snr_grid_0_30() {
  std::vector<double> s;
  for (int db = 0; db <= 30; db += 3) s.push_back(db);
  return s;
}

// Output slot of a grid point: one (parameter, estimator) series.
struct Slot {
  Parameter parameter;
  EstimatorKind estimator;
};

struct GridPoint {
  double sigma;
  GridShape shape;
  std::size_t p;
  double snr_db;
};

bool estimator_applies(EstimatorKind e, std::size_t p, std::size_t n) {
  return e != EstimatorKind::LeastSquares || p >= n;
}

std::string series_id(EstimatorKind e, double sigma) {
  std::string id = to_string(e);
  if (sigma > 0.0) id += fmt::format("-sigma{:g}", sigma);
  return id;
}

std::vector<Slot> slots_for(const ExperimentConfig& cfg, std::size_t p, std::size_t n) {
  std::vector<Slot> slots;
  for (auto e : cfg.estimators) {
    if (!estimator_applies(e, p, n)) continue;
    if (e == EstimatorKind::Consecutive) slots.push_back({Parameter::Omega, e});
    slots.push_back({Parameter::Channel, e});
  }
  return slots;
}

struct Summary {
  double mean;
  double std_error;
};

Summary summarize(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / n;
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

class PointRunner {
 public:
  PointRunner(const ExperimentConfig& cfg, const GridPoint& gp, std::uint64_t index)
      : cfg_(cfg),
        gp_(gp),
        index_(index),
        link_(symmetric_link(gp.shape, cfg.distance, cfg.wavelength, cfg.symbol_rate)),
        ideal_(los_channel(link_)),
        map_(gp.shape),
        x_(training_shifted_identity(gp.p, gp.shape.size())),
        noise_(cfg.noiseless ? 0.0 : snr_to_noise_variance(gp.snr_db)),
        slots_(slots_for(cfg, gp.p, gp.shape.size())) {}

  const std::vector<Slot>& slots() const { return slots_; }

  // Squared errors of trial `t`, one per slot, written to out[slot][t].
  void trial(std::size_t t, std::vector<std::vector<double>>& out) const {
    RandomStream rng = RandomStream::substream(cfg_.seed, index_, t);
    ChannelMatrix h = ideal_;
    if (gp_.sigma > 0.0) {
      LinkConfig link = link_;
      link.tx = perturb_positions(link_.tx, gp_.sigma, rng);
      link.rx = perturb_positions(link_.rx, gp_.sigma, rng);
      h = los_channel(link);
    }
    SingleOscillator osc = std::get<SingleOscillator>(draw_offsets(OffsetKind::Single, cfg_.omega_variance, rng));
    if (!cfg_.random_phase) osc.phi = 0.0;
    const JointChannel hp = joint_channel(h, osc);
    const PilotBlock blk = synthesize_rx(hp, osc, x_, noise_, rng);

    for (std::size_t s = 0; s < slots_.size(); ++s) {
      const Slot& sl = slots_[s];
      if (s > 0 && slots_[s - 1].estimator == sl.estimator) continue;  // filled with the previous slot
      switch (sl.estimator) {
        case EstimatorKind::LeastSquares:
          out[s][t] = channel_mse(ls_channel(x_, blk.y).h_hat, hp.h);
          break;
        case EstimatorKind::Toeplitz:
          out[s][t] = channel_mse(toeplitz_channel_average(blk.y, map_, x_.kind, gp_.p).h_hat, hp.h);
          break;
        case EstimatorKind::Consecutive: {
          const EstimationResult r = estimate_consecutive(blk.y, map_, gp_.p, cfg_.pairing);
          out[s][t] = omega_mse(*r.omega_hat, osc.omega);
          out[s + 1][t] = channel_mse(r.h_hat, hp.h);
          break;
        }
      }
    }
  }

 private:
  const ExperimentConfig& cfg_;
  GridPoint gp_;
  std::uint64_t index_;
  LinkConfig link_;
  ChannelMatrix ideal_;
  StructureMap map_;
  TrainingMatrix x_;
  double noise_;
  std::vector<Slot> slots_;
};

std::size_t worker_count(const ExperimentConfig& cfg) {
  std::size_t n = cfg.threads;
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return std::min(n, cfg.trials);
}

void run_trials(const PointRunner& runner, std::size_t trials, std::size_t workers,
                std::vector<std::vector<double>>& out) {
  if (workers <= 1) {
    for (std::size_t t = 0; t < trials; ++t) runner.trial(t, out);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t t = w; t < trials; t += workers) runner.trial(t, out);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<GridPoint> grid(const ExperimentConfig& cfg) {
  std::vector<GridPoint> g;
  for (double sigma : cfg.sigma_pos) {
    for (GridShape shape : cfg.array_shapes()) {
      for (const PilotSpec& ps : cfg.pilots) {
        const std::size_t p = ps.resolve(shape.size());
        for (double snr : cfg.snr_db) g.push_back({sigma, shape, p, snr});
      }
    }
  }
  return g;
}

double bound_or_zero(double noise, auto&& f) { return noise > 0.0 ? f() : 0.0; }

}  // namespace

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Fig2: return "fig2";
    case ExperimentKind::Fig3: return "fig3";
    case ExperimentKind::Fig4: return "fig4";
    case ExperimentKind::Custom: return "custom";
  }
  return "custom";
}

std::string to_string(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::LeastSquares: return "ls";
    case EstimatorKind::Toeplitz: return "toeplitz";
    case EstimatorKind::Consecutive: return "consecutive";
  }
  return "ls";
}

std::string to_string(Parameter p) { return p == Parameter::Channel ? "channel" : "omega"; }

ExperimentKind parse_experiment_kind(std::string_view s) {
  if (s == "fig2") return ExperimentKind::Fig2;
  if (s == "fig3") return ExperimentKind::Fig3;
  if (s == "fig4") return ExperimentKind::Fig4;
  if (s == "custom") return ExperimentKind::Custom;
  throw ConfigError(fmt::format("unknown experiment kind '{}' (expected fig2, fig3, fig4 or custom)", s));
}

EstimatorKind parse_estimator_kind(std::string_view s) {
  if (s == "ls") return EstimatorKind::LeastSquares;
  if (s == "toeplitz") return EstimatorKind::Toeplitz;
  if (s == "consecutive") return EstimatorKind::Consecutive;
  throw ConfigError(fmt::format("unknown estimator '{}' (expected ls, toeplitz or consecutive)", s));
}

std::size_t PilotSpec::resolve(std::size_t n) const {
  if (divisor == 0) return count;
  if (n % divisor != 0) throw ConfigError(fmt::format("N/{} is not an integer for N = {}", divisor, n));
  return n / divisor;
}

std::vector<GridShape> ExperimentConfig::array_shapes() const {
  if (antennas.empty()) return {shape};
  std::vector<GridShape> s;
  for (auto n : antennas) s.push_back({n, 1});
  return s;
}

void ExperimentConfig::validate() const {
  if (trials == 0) throw ConfigError("experiment.trials must be at least 1");
  if (shape.ny == 0 || shape.nx == 0) throw ConfigError("geometry.ny and geometry.nx must be at least 1");
  for (auto n : antennas) {
    if (n == 0) throw ConfigError("geometry.antennas entries must be at least 1");
  }
  if (pilots.empty()) throw ConfigError("sweep.pilots must not be empty");
  if (snr_db.empty()) throw ConfigError("sweep.snr_db must not be empty");
  if (estimators.empty()) throw ConfigError("sweep.estimators must not be empty");
  if (sigma_pos.empty()) throw ConfigError("geometry.sigma_pos must not be empty");
  for (double s : snr_db) {
    if (!std::isfinite(s)) throw ConfigError("sweep.snr_db entries must be finite");
  }
  for (double s : sigma_pos) {
    if (!(s >= 0.0)) throw ConfigError("geometry.sigma_pos entries must be non-negative");
  }
  if (!(omega_variance >= 0.0)) throw ConfigError("oscillator.omega_variance must be non-negative");
  if (!(wavelength > 0.0)) throw ConfigError("geometry.wavelength must be positive");
  if (!(distance > 0.0)) throw ConfigError("geometry.distance must be positive");
  if (!(symbol_rate > 0.0)) throw ConfigError("geometry.symbol_rate must be positive");

  for (GridShape g : array_shapes()) {
    const std::size_t n = g.size();
    const std::size_t line = g.nx == 1 ? g.ny : g.nx;
    for (const PilotSpec& ps : pilots) {
      if (ps.divisor == 0 && ps.count == 0) throw ConfigError("sweep.pilots entries must be at least 1");
      const std::size_t p = ps.resolve(n);
      if (p == 0) throw ConfigError(fmt::format("pilot count resolves to 0 for N = {}", n));
      for (auto e : estimators) {
        const std::string where = fmt::format("estimator {} at N = {}, P = {}", to_string(e), n, p);
        if (e == EstimatorKind::Toeplitz || e == EstimatorKind::Consecutive) {
          if (p > n) throw ConfigError(where + ": class averaging needs P <= N");
        }
        if (e == EstimatorKind::Consecutive) {
          if (p < 2) throw ConfigError(where + ": frequency estimation needs P >= 2");
          if (p > line) throw ConfigError(where + ": frequency estimation needs P <= antennas per line");
          if (pairing == PairingScheme::TimePairs && p % 2 != 0) throw ConfigError(where + ": time pairing needs even P");
          if (pairing == PairingScheme::AntennaPairs && line % 2 != 0) {
            throw ConfigError(where + ": antenna pairing needs an even line length");
          }
        }
      }
    }
    const bool any_ls_fits = std::any_of(pilots.begin(), pilots.end(), [&](const PilotSpec& ps) { return ps.resolve(n) >= n; });
    if (std::find(estimators.begin(), estimators.end(), EstimatorKind::LeastSquares) != estimators.end() && !any_ls_fits) {
      throw ConfigError(fmt::format("estimator ls at N = {} needs some P >= N", n));
    }
  }
}

ExperimentConfig preset_config(ExperimentKind kind) {
  ExperimentConfig c;
  c.kind = kind;
  c.trials = 10000;
  switch (kind) {
    case ExperimentKind::Fig2:
      c.shape = {3, 3};
      c.pilots = {PilotSpec::absolute(1), PilotSpec::absolute(3), PilotSpec::absolute(6), PilotSpec::absolute(9)};
      c.snr_db = snr_grid_0_30();
      c.estimators = {EstimatorKind::LeastSquares, EstimatorKind::Toeplitz};
      c.omega_variance = 0.0;
      break;
    case ExperimentKind::Fig3:
      c.shape = {6, 1};
      c.pilots = {PilotSpec::absolute(2), PilotSpec::absolute(4), PilotSpec::absolute(6)};
      c.snr_db = snr_grid_0_30();
      c.estimators = {EstimatorKind::Consecutive};
      c.omega_variance = 0.3;
      break;
    case ExperimentKind::Fig4:
      c.shape = {4, 1};
      c.antennas = {4, 8, 12, 16, 20, 24, 28, 32};
      c.pilots = {PilotSpec::fraction(2), PilotSpec::fraction(1)};
      c.snr_db = {20.0};
      c.estimators = {EstimatorKind::Consecutive};
      c.omega_variance = 0.3;
      c.sigma_pos = {0.0, c.wavelength / 20.0};
      break;
    case ExperimentKind::Custom:
      c.trials = 1000;
      break;
  }
  return c;
}

ExperimentConfig preset_config(std::string_view name) {
  const ExperimentKind k = parse_experiment_kind(name);
  if (k == ExperimentKind::Custom) throw ConfigError("'custom' is not a preset");
  return preset_config(k);
}

std::vector<std::string> preset_names() { return {"fig2", "fig3", "fig4"}; }

double channel_mse(const Eigen::MatrixXcd& h_hat, const Eigen::MatrixXcd& h) {
  if (h_hat.rows() != h.rows() || h_hat.cols() != h.cols()) throw ShapeMismatch("channel_mse needs equal shapes");
  if (h.size() == 0) throw ShapeMismatch("channel_mse of an empty matrix");
  return (h_hat - h).cwiseAbs2().mean() / 2.0;
}

double omega_mse(double omega_hat, double omega) {
  const double d = omega_hat - omega;
  return d * d;
}

double channel_crb(std::size_t m, double noise_variance) {
  return system_scale(crb_no_offset(training_orthogonal(m, m), noise_variance), m).channel_bound();
}

double omega_crb(GridShape shape, std::size_t p, double noise_variance) {
  const std::size_t n = shape.size();
  const LinkConfig link = symmetric_link(shape, 5.0, 0.005);
  const Eigen::MatrixXcd h = los_channel(link).h;
  const TrainingMatrix x = training_shifted_identity(p, n);
  const auto nn = static_cast<Eigen::Index>(n);
  try {
    return system_scale(crb_with_offset(x, Eigen::VectorXd::Zero(nn), h.row(0).transpose(), noise_variance), n)
        .omega_bound();
  } catch (const SingularMatrix&) {
  }
  const StructureMap map(shape);
  Eigen::VectorXcd g(static_cast<Eigen::Index>(map.class_count()));
  // Row 0 of the channel visits every class once.
  for (std::size_t k = 0; k < n; ++k) g(static_cast<Eigen::Index>(map.class_of(0, k))) = h(0, static_cast<Eigen::Index>(k));
  try {
    return crb_structured_system(map, x, 0.0, g, noise_variance).omega_bound();
  } catch (const SingularMatrix&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

std::vector<MseRecord> crb_records(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<MseRecord> out;
  const std::string exp = to_string(cfg.kind);
  const bool has_channel = !cfg.estimators.empty();
  const bool has_omega =
      std::find(cfg.estimators.begin(), cfg.estimators.end(), EstimatorKind::Consecutive) != cfg.estimators.end();
  for (GridShape shape : cfg.array_shapes()) {
    const std::size_t n = shape.size();
    for (double snr : cfg.snr_db) {
      const double noise = cfg.noiseless ? 0.0 : snr_to_noise_variance(snr);
      if (has_channel) {
        out.push_back({exp, Parameter::Channel, "crb", snr, n, n,
                       bound_or_zero(noise, [&] { return channel_crb(n, noise); }),
                       bound_or_zero(noise, [&] { return channel_crb(n, noise); }), 0.0, 0, cfg.seed});
      }
      if (!has_omega) continue;
      for (const PilotSpec& ps : cfg.pilots) {
        const std::size_t p = ps.resolve(n);
        const double b = bound_or_zero(noise, [&] { return omega_crb(shape, p, noise); });
        out.push_back({exp, Parameter::Omega, "crb", snr, n, p, b, b, 0.0, 0, cfg.seed});
      }
    }
  }
  return out;
}

std::vector<MseRecord> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::string exp = to_string(cfg.kind);
  const std::size_t workers = worker_count(cfg);
  std::vector<MseRecord> records;

  const auto points = grid(cfg);
  for (std::size_t gi = 0; gi < points.size(); ++gi) {
    const GridPoint& gp = points[gi];
    const std::size_t n = gp.shape.size();
    const PointRunner runner(cfg, gp, gi);
    const auto& slots = runner.slots();
    if (slots.empty()) continue;

    std::vector<std::vector<double>> errs(slots.size(), std::vector<double>(cfg.trials, 0.0));
    try {
      run_trials(runner, cfg.trials, workers, errs);
    } catch (const std::exception& e) {
      throw Error(fmt::format("grid point sigma_pos={:g}, N={}, P={}, snr={:g} dB: {}", gp.sigma, n, gp.p, gp.snr_db,
                              e.what()));
    }

    const double noise = cfg.noiseless ? 0.0 : snr_to_noise_variance(gp.snr_db);
    for (std::size_t s = 0; s < slots.size(); ++s) {
      const Summary sm = summarize(errs[s]);
      const double crb = bound_or_zero(noise, [&] {
        return slots[s].parameter == Parameter::Channel ? channel_crb(n, noise) : omega_crb(gp.shape, gp.p, noise);
      });
      records.push_back({exp, slots[s].parameter, series_id(slots[s].estimator, gp.sigma), gp.snr_db, n, gp.p,
                         sm.mean, crb, sm.std_error, cfg.trials, cfg.seed});
    }
  }
  if (cfg.crb_rows) {
    auto bounds = crb_records(cfg);
    records.insert(records.end(), bounds.begin(), bounds.end());
  }
  return records;
}

}  // namespace losmimo
