#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "json.hpp"
#include "relent/config.hpp"
#include "relent/table.hpp"

namespace relent {

/// One experiment run: the per-row table written as `<name>.csv`, the
/// verdict written as `verdict.json`, and optional extra JSON artifacts.
struct ExperimentReport {
  std::string name;
  Table table;
  nlohmann::json verdict;
  /// The verdict agrees with the statement under test.
  bool passed = false;
  /// Extra files as (file name, content).
  std::vector<std::pair<std::string, nlohmann::json>> artifacts;
};

struct ExperimentInfo {
  const char* name;
  const char* description;
  const char* csv_schema;
};

std::span<const ExperimentInfo> experiment_catalog();

/// Columns n,rel_entropy,lp_distance,measure_deviation,tail_p,concentration_total.
/// Throws ValidationError when the growth bounds fail.
ExperimentReport run_equivalence_p(const ExperimentConfig& config);

/// Columns n,entropy,rel_entropy,l1_distance. Throws ValidationError when
/// the reference is not strictly positive or a term is negative.
ExperimentReport run_l1_xlogx(const ExperimentConfig& config);

/// Columns trial,check,lhs,rhs,slack,holds; two rows (ckp, generalized_ckp)
/// per trial.
ExperimentReport run_ckp_sweep(const ExperimentConfig& config);

/// Columns window,x_lo,x_hi,atom_error,w1,excess,truth_excess, plus the
/// artifact young_recovery.json.
ExperimentReport run_young_recovery(const ExperimentConfig& config);

/// Dispatch by name; throws ConfigError for unknown names.
ExperimentReport run_experiment(const std::string& name, const ExperimentConfig& config);

// Verdicts recomputed from the emitted table. `params` is the "params"
// object of the verdict, which only echoes configuration.

struct EquivalenceParams {
  double vanish_tolerance = 1e-3;
  /// Expected co-vanishing (strong family) or co-non-vanishing.
  bool expect_vanishing = false;
  /// 2^{2 alpha} when the ratio check applies.
  std::optional<double> ratio_target;
  double ratio_tolerance = 0.1;
  /// The ratio check enters `passed` (quadratic entropy); otherwise it is
  /// informational.
  bool assert_ratio = true;
};

nlohmann::json summarize_equivalence(const Table& table, const EquivalenceParams& params);

nlohmann::json summarize_l1_xlogx(const Table& table, double vanish_tolerance);

nlohmann::json summarize_ckp_sweep(const Table& table);

nlohmann::json summarize_young_recovery(const Table& table, double atom_tolerance,
                                        double concentration_tolerance);

/// Writes `<name>.csv`, `verdict.json` and the artifacts into `out_dir`,
/// creating it when needed.
void write_report(const ExperimentReport& report, const std::filesystem::path& out_dir);

}  // namespace relent
