#include "relent/harness.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>

#include "CLI11.hpp"
#include "relent/diagnostics.hpp"
#include "relent/functionals.hpp"
#include "relent/young_measure.hpp"

namespace relent {

namespace fs = std::filesystem;

namespace {

struct Paths {
  std::string config;
  std::string out = ".";
};

std::ofstream open_output(const fs::path& dir, const std::string& file) {
  fs::create_directories(dir);
  std::ofstream f(dir / file, std::ios::binary);
  if (!f) throw Error("cannot write '" + (dir / file).string() + "'");
  return f;
}

void write_json(const fs::path& dir, const std::string& file, const nlohmann::json& j) {
  auto f = open_output(dir, file);
  f << j.dump(2) << '\n';
}

const SequenceFamily& need_sequence(const ExperimentConfig& cfg) {
  if (!cfg.sequence) throw ConfigError("sequence", "required by this command");
  return *cfg.sequence;
}

SequenceSample config_sample(const ExperimentConfig& cfg) {
  try {
    return sample(need_sequence(cfg), cfg.schedule, cfg.grid);
  } catch (const AlignmentError& e) {
    throw ConfigError("schedule", e.what());
  }
}

DiscreteField config_reference(const ExperimentConfig& cfg, const EntropySpec& h) {
  if (cfg.reference) return *cfg.reference;
  if (cfg.sequence) {
    if (auto truth = ground_truth(*cfg.sequence, h, cfg.grid)) return truth->weak_limit;
  }
  throw ConfigError("reference", "required: no analytic weak limit available");
}

int cmd_list(std::ostream& out) {
  for (const auto& e : experiment_catalog()) {
    out << e.name << "\n  " << e.description << "\n  csv: " << e.csv_schema << '\n';
  }
  out << "config: JSON object with \"schema\": " << kConfigSchema << '\n';
  return kExitOk;
}

int cmd_generate(const Paths& paths, std::ostream& out) {
  const auto cfg = load_config(paths.config);
  const auto s = config_sample(cfg);
  const fs::path dir(paths.out);
  nlohmann::json manifest;
  manifest["family"] = family_name(*cfg.sequence);
  manifest["grid"] = {{"a", cfg.grid.a}, {"b", cfg.grid.b}, {"N", cfg.grid.cells}};
  nlohmann::json files = nlohmann::json::array();
  for (std::size_t k = 0; k < s.size(); ++k) {
    const std::string name = "u_n" + std::to_string(s.indices[k]) + ".csv";
    auto f = open_output(dir, name);
    write_csv(f, s.terms[k]);
    files.push_back({{"n", s.indices[k]}, {"file", name}});
  }
  manifest["terms"] = files;
  if (cfg.entropy) {
    if (auto truth = ground_truth(*cfg.sequence, *cfg.entropy, cfg.grid)) {
      auto f = open_output(dir, "weak_limit.csv");
      write_csv(f, truth->weak_limit);
      nlohmann::json atoms = nlohmann::json::array();
      for (const auto& c : truth->concentration) {
        atoms.push_back({{"location", c.location}, {"mass", c.mass}});
      }
      manifest["ground_truth"] = {
          {"entropy", cfg.entropy->name()},
          {"weak_limit", "weak_limit.csv"},
          {"homogeneous_young", truth->homogeneous_young
                                    ? measure_to_json(*truth->homogeneous_young)
                                    : nlohmann::json()},
          {"concentration", atoms},
          {"strong_limit_exists", truth->strong_limit_exists}};
    }
  }
  write_json(dir, "manifest.json", manifest);
  out << "wrote " << s.size() << " terms to " << dir.string() << '\n';
  return kExitOk;
}

int cmd_evaluate(const Paths& paths, std::ostream& out) {
  const auto cfg = load_config(paths.config);
  if (!cfg.entropy) throw ConfigError("entropy", "required by evaluate");
  const auto& h = *cfg.entropy;
  DiscreteField v = [&] {
    if (cfg.v) return *cfg.v;
    if (cfg.sequence) return materialize(*cfg.sequence, cfg.term_index(), cfg.grid);
    throw ConfigError("v", "required by evaluate (or give sequence and n)");
  }();
  const DiscreteField u = config_reference(cfg, h);
  require_same_layout(v, u);

  const double p = cfg.p.value_or(std::max(1.0, h.growth_exponent()));
  nlohmann::json result;
  result["entropy"] = h.name();
  result["rel_entropy"] = rel_entropy_functional(h, v, u);
  try {
    CompensatedSum sym;
    for (std::size_t i = 0; i < v.size(); ++i) sym.add(bregman_sym(h, v[i], u[i]));
    result["rel_entropy_sym"] = v.grid().dx() * sym.value();
  } catch (const DomainError& e) {
    // f(u|v) needs v > 0 for log entropies; the symmetrized form is infinite.
    result["rel_entropy_sym"] = nullptr;
    result["rel_entropy_sym_note"] = e.what();
  }
  result["p"] = p;
  result["lp_distance"] = lp_distance(v, u, p);
  result["l1_distance"] = lp_distance(v, u, 1.0);

  std::vector<InequalityVerdict> checks;
  if (cfg.convexity_c) checks.push_back(uniform_convexity_bound_check(h, *cfg.convexity_c, v, u));
  const bool densities = v.is_scalar() && min_component(v) >= 0.0 && min_component(u) >= 0.0;
  if (densities) {
    result["kl_divergence"] = kl_divergence(v, u);
    const bool unit = std::fabs(integrate_scalar(v) - 1.0) <= cfg.mass_tolerance &&
                      std::fabs(integrate_scalar(u) - 1.0) <= cfg.mass_tolerance;
    if (unit) checks.push_back(ckp_check(v, u, {cfg.mass_tolerance, false}));
  }
  if (h.is<NormalizedXLogXEntropy>()) {
    double A = 0.0;
    if (cfg.A) {
      A = *cfg.A;
    } else {
      const double lo = std::min(min_component(v), min_component(u));
      const double hi = std::max(max_magnitude(v), max_magnitude(u));
      const auto est = compute_A(h, cfg.ckp_p, std::max(lo, 1e-12), hi * (1.0 + 1e-12));
      if (!(est.value > 0.0)) throw ValidationError("A is not positive on the data range");
      A = est.value;
    }
    checks.push_back(generalized_ckp_check(h, v, u, cfg.ckp_p, A));
  }
  if (const auto* pw = std::get_if<PowerEntropy>(&h.variant())) {
    const auto id = power_identity(pw->p, v, u);
    result["power_identity"] = {{"lhs", id.lhs}, {"rhs", id.rhs}};
  }

  const fs::path dir(paths.out);
  bool all_hold = true;
  nlohmann::json jchecks = nlohmann::json::array();
  for (const auto& c : checks) {
    all_hold = all_hold && c.holds;
    jchecks.push_back({{"check", c.check}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"slack", c.slack},
                       {"holds", c.holds}, {"degenerate", c.degenerate}});
  }
  result["checks"] = jchecks;
  {
    auto f = open_output(dir, "checks.csv");
    write_verdict_csv(f, checks);
  }
  write_json(dir, "evaluate.json", result);
  out << "rel_entropy " << format_number(result["rel_entropy"].get<double>()) << '\n';
  for (const auto& c : checks) {
    out << c.check << (c.holds ? " holds" : " FAILS") << " (slack " << format_number(c.slack)
        << ")\n";
  }
  return all_hold ? kExitOk : kExitValidation;
}

int cmd_experiment(const std::string& name, const Paths& paths, std::ostream& out,
                   std::ostream& err) {
  bool known = false;
  for (const auto& e : experiment_catalog()) known = known || name == e.name;
  if (!known) {
    err << "unknown experiment '" << name << "' (see --list)\n";
    return kExitUsage;
  }
  const auto cfg = load_config(paths.config, name);
  const fs::path dir(paths.out);
  ExperimentReport report;
  try {
    report = run_experiment(name, cfg);
  } catch (const ValidationError& e) {
    write_json(dir, "verdict.json",
               {{"experiment", name}, {"status", "hypothesis_failure"}, {"message", e.what()},
                {"passed", false}});
    throw;
  } catch (const DomainError& e) {
    write_json(dir, "verdict.json",
               {{"experiment", name}, {"status", "hypothesis_failure"}, {"message", e.what()},
                {"passed", false}});
    throw;
  }
  report.verdict["status"] = "completed";
  write_report(report, dir);
  out << report.verdict["summary"].get<std::string>() << '\n';
  return report.passed ? kExitOk : kExitValidation;
}

int cmd_young(const Paths& paths, std::ostream& out) {
  const auto cfg = load_config(paths.config);
  auto cfg_sample = cfg;
  if (cfg.n) cfg_sample.schedule = {*cfg.n};
  const auto s = config_sample(cfg_sample);
  YoungMeasureEstimate ym;
  try {
    ym = estimate_young_measure(s, cfg.young);
  } catch (const AlignmentError& e) {
    throw ConfigError("estimator.window", e.what());
  }
  const fs::path dir(paths.out);
  write_json(dir, "young.json", young_to_json(ym));

  const auto phis = default_test_functions(cfg.grid);
  const auto weak = test_weak_limit(s, [](double x) { return x; }, ym, phis);
  Table wt({"test_function", "n", "error"});
  for (const auto& row : weak.rows) {
    wt.add_row({static_cast<std::int64_t>(row.test_function), static_cast<std::int64_t>(row.n),
                row.error});
  }
  {
    auto f = open_output(dir, "weak_limit.csv");
    wt.write(f);
  }
  nlohmann::json summary{{"n_used", ym.n_used}, {"windows", ym.windows.size()},
                         {"weak_limit_final_errors", weak.final_errors}};
  if (cfg.entropy) {
    const auto conc = estimate_concentration(s, *cfg.entropy, ym, cfg.concentration);
    Table ct({"window", "x_lo", "x_hi", "excess"});
    for (std::size_t w = 0; w < ym.windows.size(); ++w) {
      ct.add_row({static_cast<std::int64_t>(w), ym.window_grid.left(w), ym.window_grid.right(w),
                  conc.window_excess[w]});
    }
    auto f = open_output(dir, "concentration.csv");
    ct.write(f);
    summary["concentration_total"] = conc.total;
    summary["peak_window"] = conc.peak_window;
    summary["estimator_failure"] = conc.estimator_failure;
  }
  write_json(dir, "young_summary.json", summary);
  out << "estimated Young measure on " << ym.windows.size() << " windows (n = " << ym.n_used
      << ")\n";
  return kExitOk;
}

int cmd_diagnose(const Paths& paths, std::ostream& out) {
  const auto cfg = load_config(paths.config);
  const auto s = config_sample(cfg);
  const EntropySpec h = cfg.entropy.value_or(EntropySpec::quadratic());
  const DiscreteField u = config_reference(cfg, h);
  const double p = cfg.p.value_or(cfg.entropy ? std::max(1.0, h.growth_exponent()) : 2.0);

  const fs::path dir(paths.out);
  const auto profile = tail_profile(s, p, cfg.thresholds);
  {
    auto f = open_output(dir, "tail_profile.csv");
    write_tail_csv(f, profile);
  }
  const auto vit = vitali_verdict(s, u, p, cfg.vitali);
  nlohmann::json result{{"vitali", vitali_to_json(vit)}};
  if (cfg.entropy) result["dlvp"] = dlvp_to_json(dlvp_probe(s, h, cfg.dlvp));
  write_json(dir, "diagnose.json", result);
  out << "uniformly p-integrable: " << (vit.uniformly_p_integrable ? "yes" : "no")
      << ", converges in measure: " << (vit.converges_in_measure ? "yes" : "no")
      << ", L^p decay: " << (vit.lp_decay ? "yes" : "no")
      << (vit.consistent ? "" : " (INCONSISTENT)") << '\n';
  return vit.consistent ? kExitOk : kExitValidation;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Relative entropy toolkit on cell-averaged fields", "relent"};
  app.require_subcommand(0, 1);
  bool list = false;
  app.add_flag("--list", list, "List experiments and their CSV schemas");

  Paths paths;
  std::string experiment_name;
  auto add_io = [&](CLI::App* sub) {
    sub->add_option("--config", paths.config, "JSON config (schema 1)")->required();
    sub->add_option("--out", paths.out, "Output directory")->capture_default_str();
  };
  auto* generate = app.add_subcommand("generate", "Write sequence terms as CSV");
  auto* evaluate = app.add_subcommand("evaluate", "Relative entropy and inequality checks");
  auto* experiment = app.add_subcommand("experiment", "Run a named experiment");
  auto* young = app.add_subcommand("young", "Young measure and concentration estimates");
  auto* diagnose = app.add_subcommand("diagnose", "Tail profile, Vitali and DLVP diagnostics");
  for (auto* sub : {generate, evaluate, experiment, young, diagnose}) add_io(sub);
  experiment->add_option("name", experiment_name, "Experiment name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (list) return cmd_list(out);
    if (generate->parsed()) return cmd_generate(paths, out);
    if (evaluate->parsed()) return cmd_evaluate(paths, out);
    if (experiment->parsed()) return cmd_experiment(experiment_name, paths, out, err);
    if (young->parsed()) return cmd_young(paths, out);
    if (diagnose->parsed()) return cmd_diagnose(paths, out);
    err << app.help();
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const AlignmentError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const GridMismatch& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "hypothesis failure: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DomainError& e) {
    err << "hypothesis failure: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("relent");
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace relent
