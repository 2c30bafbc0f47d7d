#include "relent/config.hpp"

#include <fstream>
#include <set>

namespace relent {

namespace {

const std::set<std::string> kTopLevelKeys = {
    "schema",     "experiment",  "grid",           "entropy",        "sequence",
    "reference",  "schedule",    "n",              "p",              "growth_c",
    "vanish_tolerance", "clip_floor", "trials",    "seed",           "identity_pairs",
    "mass_tolerance",   "ckp_p",      "A",         "estimator",      "tolerances",
    "vitali",     "dlvp",        "thresholds",     "v",              "u",
    "c",          "comment"};

double get_number(const nlohmann::json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError(key, "must be a number");
  return j.get<double>();
}

double get_positive(const nlohmann::json& j, const std::string& key) {
  const double v = get_number(j, key);
  if (!(v > 0.0)) throw ConfigError(key, "must be positive");
  return v;
}

std::size_t get_count(const nlohmann::json& j, const std::string& key) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw ConfigError(key, "must be a nonnegative integer");
  }
  return j.get<std::size_t>();
}

std::vector<double> get_numbers(const nlohmann::json& j, const std::string& key) {
  if (!j.is_array() || j.empty()) throw ConfigError(key, "must be a nonempty array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    out.push_back(get_number(j[k], key + "[" + std::to_string(k) + "]"));
  }
  return out;
}

void check_keys(const nlohmann::json& j, const std::string& key,
                const std::set<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError(key + "." + it.key(), "unknown key");
  }
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j,
                                  const std::string& experiment_hint) {
  if (!j.is_object()) throw ConfigError("<root>", "config must be a JSON object");
  if (!j.contains("schema")) throw ConfigError("schema", "missing (expected 1)");
  if (!j["schema"].is_number_integer() || j["schema"].get<int>() != kConfigSchema) {
    throw ConfigError("schema", "unsupported schema version (expected 1)");
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!kTopLevelKeys.count(it.key())) throw ConfigError(it.key(), "unknown key");
  }

  ExperimentConfig cfg;
  cfg.experiment = experiment_hint;
  if (j.contains("experiment")) {
    if (!j["experiment"].is_string()) throw ConfigError("experiment", "must be a string");
    cfg.experiment = j["experiment"].get<std::string>();
  }
  if (cfg.experiment == "ckp_sweep") cfg.grid.cells = std::size_t{1} << 12;

  if (j.contains("grid")) {
    const auto& g = j["grid"];
    if (!g.is_object()) throw ConfigError("grid", "must be an object");
    check_keys(g, "grid", {"a", "b", "N"});
    const double a = g.contains("a") ? get_number(g["a"], "grid.a") : 0.0;
    const double b = g.contains("b") ? get_number(g["b"], "grid.b") : 1.0;
    const std::size_t n = g.contains("N") ? get_count(g["N"], "grid.N") : cfg.grid.cells;
    if (!(a < b)) throw ConfigError("grid.b", "must exceed grid.a");
    if (n == 0) throw ConfigError("grid.N", "must be positive");
    cfg.grid = build_uniform_grid(a, b, n);
  }

  if (j.contains("entropy")) cfg.entropy = entropy_from_json(j["entropy"], "entropy");
  if (j.contains("sequence")) {
    cfg.sequence = sequence_from_json(j["sequence"], cfg.grid, "sequence");
  }
  if (j.contains("reference")) {
    cfg.reference = field_from_json(j["reference"], cfg.grid, "reference");
  } else if (j.contains("u")) {
    cfg.reference = field_from_json(j["u"], cfg.grid, "u");
  }
  if (j.contains("v")) cfg.v = field_from_json(j["v"], cfg.grid, "v");
  if (j.contains("c")) cfg.convexity_c = get_positive(j["c"], "c");

  if (j.contains("schedule")) {
    const auto& s = j["schedule"];
    if (!s.is_array() || s.empty()) throw ConfigError("schedule", "must be a nonempty array");
    cfg.schedule.clear();
    for (std::size_t k = 0; k < s.size(); ++k) {
      const auto n = get_count(s[k], "schedule[" + std::to_string(k) + "]");
      if (n == 0) throw ConfigError("schedule[" + std::to_string(k) + "]", "must be positive");
      cfg.schedule.push_back(n);
    }
  }
  if (j.contains("n")) {
    cfg.n = get_count(j["n"], "n");
    if (*cfg.n == 0) throw ConfigError("n", "must be positive");
  }
  if (j.contains("p")) {
    cfg.p = get_number(j["p"], "p");
    if (!(*cfg.p >= 1.0)) throw ConfigError("p", "must be >= 1");
  }
  if (j.contains("growth_c")) cfg.growth_c = get_positive(j["growth_c"], "growth_c");
  if (j.contains("vanish_tolerance")) {
    cfg.vanish_tolerance = get_positive(j["vanish_tolerance"], "vanish_tolerance");
    cfg.vitali.vanish_tolerance = cfg.vanish_tolerance;
  }
  if (j.contains("clip_floor")) cfg.clip_floor = get_positive(j["clip_floor"], "clip_floor");
  if (j.contains("trials")) cfg.trials = get_count(j["trials"], "trials");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer()) throw ConfigError("seed", "must be an integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("identity_pairs")) {
    cfg.identity_pairs = get_count(j["identity_pairs"], "identity_pairs");
  }
  if (j.contains("mass_tolerance")) {
    cfg.mass_tolerance = get_positive(j["mass_tolerance"], "mass_tolerance");
  }
  if (j.contains("ckp_p")) {
    cfg.ckp_p = get_number(j["ckp_p"], "ckp_p");
    if (!(cfg.ckp_p >= 1.0 && cfg.ckp_p <= 2.0)) throw ConfigError("ckp_p", "must lie in [1, 2]");
  }
  if (j.contains("A")) cfg.A = get_positive(j["A"], "A");

  if (j.contains("estimator")) {
    const auto& e = j["estimator"];
    if (!e.is_object()) throw ConfigError("estimator", "must be an object");
    check_keys(e, "estimator",
               {"window", "bin_width", "atom_threshold", "pool", "noise_floor",
                "regular_mass_threshold"});
    if (e.contains("window")) cfg.young.window_width = get_positive(e["window"], "estimator.window");
    if (e.contains("bin_width")) {
      cfg.young.bin_width = get_number(e["bin_width"], "estimator.bin_width");
      if (cfg.young.bin_width < 0.0) throw ConfigError("estimator.bin_width", "must be >= 0");
    }
    if (e.contains("atom_threshold")) {
      cfg.young.atom_threshold = get_positive(e["atom_threshold"], "estimator.atom_threshold");
    }
    if (e.contains("pool")) {
      if (!e["pool"].is_boolean()) throw ConfigError("estimator.pool", "must be a boolean");
      cfg.young.pool_terms = e["pool"].get<bool>();
    }
    if (e.contains("noise_floor")) {
      cfg.concentration.noise_floor = get_positive(e["noise_floor"], "estimator.noise_floor");
    }
    if (e.contains("regular_mass_threshold")) {
      cfg.concentration.regular_mass_threshold =
          get_positive(e["regular_mass_threshold"], "estimator.regular_mass_threshold");
    }
  }
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    if (!t.is_object()) throw ConfigError("tolerances", "must be an object");
    check_keys(t, "tolerances", {"atom", "concentration"});
    if (t.contains("atom")) cfg.atom_tolerance = get_positive(t["atom"], "tolerances.atom");
    if (t.contains("concentration")) {
      cfg.concentration_tolerance =
          get_positive(t["concentration"], "tolerances.concentration");
    }
  }
  if (j.contains("vitali")) {
    const auto& v = j["vitali"];
    if (!v.is_object()) throw ConfigError("vitali", "must be an object");
    check_keys(v, "vitali", {"epsilon", "m_max", "m_scale", "measure_epsilon"});
    if (v.contains("epsilon")) cfg.vitali.epsilon = get_positive(v["epsilon"], "vitali.epsilon");
    if (v.contains("m_max")) cfg.vitali.m_max = get_positive(v["m_max"], "vitali.m_max");
    if (v.contains("m_scale")) cfg.vitali.m_scale = get_positive(v["m_scale"], "vitali.m_scale");
    if (v.contains("measure_epsilon")) {
      cfg.vitali.measure_epsilon = get_positive(v["measure_epsilon"], "vitali.measure_epsilon");
    }
  }
  if (j.contains("dlvp")) {
    const auto& d = j["dlvp"];
    if (!d.is_object()) throw ConfigError("dlvp", "must be an object");
    check_keys(d, "dlvp", {"epsilons"});
    if (d.contains("epsilons")) cfg.dlvp.epsilons = get_numbers(d["epsilons"], "dlvp.epsilons");
  }
  if (j.contains("thresholds")) {
    cfg.thresholds = get_numbers(j["thresholds"], "thresholds");
    if (!std::is_sorted(cfg.thresholds.begin(), cfg.thresholds.end())) {
      throw ConfigError("thresholds", "must be sorted ascending");
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path, const std::string& experiment_hint) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  return config_from_json(j, experiment_hint);
}

}  // namespace relent
