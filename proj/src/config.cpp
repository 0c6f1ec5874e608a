// SPDX-License-Identifier: Apache-2.0
#include "losmimo/config.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "losmimo/errors.hpp"

namespace losmimo {

namespace {

using json = nlohmann::json;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"experiment", {"kind", "trials", "seed", "threads"}},
      {"geometry", {"ny", "nx", "antennas", "wavelength", "distance", "symbol_rate", "sigma_pos"}},
      {"oscillator", {"omega_variance", "random_phase"}},
      {"sweep", {"snr_db", "pilots", "estimators", "pairing", "noiseless", "crb_rows"}},
      {"output", {"path"}},
  };
  return s;
}

void check_keys(const json& doc) {
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  for (const auto& [section, body] : doc.items()) {
    auto it = schema().find(section);
    if (it == schema().end()) throw ConfigError(fmt::format("unknown section '{}'", section));
    if (!body.is_object()) throw ConfigError(fmt::format("section '{}' must be an object", section));
    for (const auto& [key, value] : body.items()) {
      if (!it->second.contains(key)) throw ConfigError(fmt::format("unknown key '{}.{}'", section, key));
    }
  }
}

const json* find(const json& doc, const char* section, const char* key) {
  auto s = doc.find(section);
  if (s == doc.end()) return nullptr;
  auto k = s->find(key);
  return k == s->end() ? nullptr : &*k;
}

std::string path_of(const char* section, const char* key) { return fmt::format("{}.{}", section, key); }

std::uint64_t as_uint(const json& v, const std::string& where) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ConfigError(fmt::format("{} must be a non-negative integer", where));
  }
  return v.get<std::uint64_t>();
}

double as_double(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(fmt::format("{} must be a number", where));
  return v.get<double>();
}

bool as_bool(const json& v, const std::string& where) {
  if (!v.is_boolean()) throw ConfigError(fmt::format("{} must be true or false", where));
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) throw ConfigError(fmt::format("{} must be a string", where));
  return v.get<std::string>();
}

template <class F>
auto as_list(const json& v, const std::string& where, F&& item) {
  if (!v.is_array()) throw ConfigError(fmt::format("{} must be an array", where));
  std::vector<decltype(item(v, where))> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(item(v[i], fmt::format("{}[{}]", where, i)));
  return out;
}

PilotSpec as_pilot(const json& v, const std::string& where) {
  if (v.is_number_integer()) return PilotSpec::absolute(static_cast<std::size_t>(as_uint(v, where)));
  if (!v.is_string()) throw ConfigError(fmt::format("{} must be an integer, \"N\" or \"N/k\"", where));
  try {
    return parse_pilot_spec(v.get<std::string>());
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", where, e.what()));
  }
}

json pilot_json(const PilotSpec& p) {
  if (p.divisor == 0) return p.count;
  if (p.divisor == 1) return "N";
  return fmt::format("N/{}", p.divisor);
}

PairingScheme parse_pairing(const std::string& s, const std::string& where) {
  if (s == "time") return PairingScheme::TimePairs;
  if (s == "antenna") return PairingScheme::AntennaPairs;
  throw ConfigError(fmt::format("{} must be \"time\" or \"antenna\"", where));
}

}  // namespace

PilotSpec parse_pilot_spec(std::string_view text) {
  auto digits = [](std::string_view t) {
    return !t.empty() && std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
  };
  if (digits(text)) return PilotSpec::absolute(static_cast<std::size_t>(std::stoull(std::string(text))));
  if (text == "N") return PilotSpec::fraction(1);
  if (text.size() > 2 && text.substr(0, 2) == "N/" && digits(text.substr(2))) {
    const auto d = std::stoull(std::string(text.substr(2)));
    if (d > 0) return PilotSpec::fraction(static_cast<std::size_t>(d));
  }
  throw ConfigError(fmt::format("cannot read pilot count '{}' (expected an integer, N or N/k)", text));
}

ExperimentConfig parse_config(std::string_view text) {
  json doc;
  const bool blank = std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c) != 0; });
  if (blank) {
    doc = json::object();
  } else {
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(fmt::format("malformed configuration: {}", e.what()));
    }
  }
  check_keys(doc);

  const json* kind = find(doc, "experiment", "kind");
  if (kind == nullptr) {
    throw ConfigError("missing required keys: experiment.kind (one of fig2, fig3, fig4, custom)");
  }
  const ExperimentKind k = parse_experiment_kind(as_string(*kind, "experiment.kind"));
  ExperimentConfig c = preset_config(k);

  if (k == ExperimentKind::Custom) {
    std::vector<std::string> missing;
    for (const char* key : {"snr_db", "pilots", "estimators"}) {
      if (find(doc, "sweep", key) == nullptr) missing.push_back(path_of("sweep", key));
    }
    if (find(doc, "geometry", "ny") == nullptr && find(doc, "geometry", "antennas") == nullptr) {
      missing.emplace_back("geometry.ny or geometry.antennas");
    }
    if (!missing.empty()) {
      std::string list;
      for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
      throw ConfigError("missing required keys for a custom experiment: " + list);
    }
  }

  auto get = [&](const char* section, const char* key, auto&& apply) {
    if (const json* v = find(doc, section, key)) apply(*v, path_of(section, key));
  };
  auto size = [](const json& v, const std::string& w) { return static_cast<std::size_t>(as_uint(v, w)); };

  get("experiment", "trials", [&](const json& v, const std::string& w) { c.trials = size(v, w); });
  get("experiment", "seed", [&](const json& v, const std::string& w) { c.seed = as_uint(v, w); });
  get("experiment", "threads", [&](const json& v, const std::string& w) { c.threads = size(v, w); });
  get("geometry", "ny", [&](const json& v, const std::string& w) { c.shape.ny = size(v, w); });
  get("geometry", "nx", [&](const json& v, const std::string& w) { c.shape.nx = size(v, w); });
  get("geometry", "antennas", [&](const json& v, const std::string& w) { c.antennas = as_list(v, w, size); });
  get("geometry", "wavelength", [&](const json& v, const std::string& w) { c.wavelength = as_double(v, w); });
  get("geometry", "distance", [&](const json& v, const std::string& w) { c.distance = as_double(v, w); });
  get("geometry", "symbol_rate", [&](const json& v, const std::string& w) { c.symbol_rate = as_double(v, w); });
  get("geometry", "sigma_pos", [&](const json& v, const std::string& w) { c.sigma_pos = as_list(v, w, as_double); });
  get("oscillator", "omega_variance", [&](const json& v, const std::string& w) { c.omega_variance = as_double(v, w); });
  get("oscillator", "random_phase", [&](const json& v, const std::string& w) { c.random_phase = as_bool(v, w); });
  get("sweep", "snr_db", [&](const json& v, const std::string& w) { c.snr_db = as_list(v, w, as_double); });
  get("sweep", "pilots", [&](const json& v, const std::string& w) { c.pilots = as_list(v, w, as_pilot); });
  get("sweep", "estimators", [&](const json& v, const std::string& w) {
    c.estimators = as_list(v, w, [](const json& e, const std::string& ew) {
      try {
        return parse_estimator_kind(as_string(e, ew));
      } catch (const ConfigError& err) {
        throw ConfigError(fmt::format("{}: {}", ew, err.what()));
      }
    });
  });
  get("sweep", "pairing", [&](const json& v, const std::string& w) { c.pairing = parse_pairing(as_string(v, w), w); });
  get("sweep", "noiseless", [&](const json& v, const std::string& w) { c.noiseless = as_bool(v, w); });
  get("sweep", "crb_rows", [&](const json& v, const std::string& w) { c.crb_rows = as_bool(v, w); });
  get("output", "path", [&](const json& v, const std::string& w) { c.output = as_string(v, w); });

  c.validate();
  return c;
}

std::string render_config(const ExperimentConfig& c) {
  json pilots = json::array();
  for (const auto& p : c.pilots) pilots.push_back(pilot_json(p));
  json estimators = json::array();
  for (auto e : c.estimators) estimators.push_back(to_string(e));

  json doc;
  doc["experiment"] = {{"kind", to_string(c.kind)}, {"trials", c.trials}, {"seed", c.seed}, {"threads", c.threads}};
  doc["geometry"] = {{"ny", c.shape.ny},
                     {"nx", c.shape.nx},
                     {"antennas", c.antennas},
                     {"wavelength", c.wavelength},
                     {"distance", c.distance},
                     {"symbol_rate", c.symbol_rate},
                     {"sigma_pos", c.sigma_pos}};
  doc["oscillator"] = {{"omega_variance", c.omega_variance}, {"random_phase", c.random_phase}};
  doc["sweep"] = {{"snr_db", c.snr_db},
                  {"pilots", pilots},
                  {"estimators", estimators},
                  {"pairing", c.pairing == PairingScheme::TimePairs ? "time" : "antenna"},
                  {"noiseless", c.noiseless},
                  {"crb_rows", c.crb_rows}};
  doc["output"] = {{"path", c.output}};
  return doc.dump(2) + "\n";
}

}  // namespace losmimo
