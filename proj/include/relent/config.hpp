#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "relent/diagnostics.hpp"
#include "relent/entropy.hpp"
#include "relent/grid_field.hpp"
#include "relent/sequences.hpp"
#include "relent/young_measure.hpp"

namespace relent {

inline constexpr int kConfigSchema = 1;

/// Parsed JSON configuration shared by every CLI subcommand. Keys absent
/// from the JSON keep the defaults below.
struct ExperimentConfig {
  std::string experiment;
  Grid grid{0.0, 1.0, std::size_t{1} << 15};
  std::optional<EntropySpec> entropy;
  std::optional<SequenceFamily> sequence;
  /// Reference field u; defaults to the analytic weak limit when one exists.
  std::optional<DiscreteField> reference;
  std::vector<std::size_t> schedule{4, 8, 16, 32, 64, 128, 256, 512, 1024};
  /// Single term used by the Young-measure tools; defaults to the last
  /// schedule entry.
  std::optional<std::size_t> n;
  std::optional<double> p;
  double growth_c = 1.0;
  double vanish_tolerance = 1e-3;
  std::optional<double> clip_floor;

  std::size_t trials = 10000;
  std::uint64_t seed = 1;
  std::size_t identity_pairs = 1;
  double mass_tolerance = 1e-8;
  double ckp_p = 1.0;
  std::optional<double> A;

  YoungOptions young;
  ConcentrationOptions concentration;
  double atom_tolerance = 0.02;
  double concentration_tolerance = 0.05;

  VitaliOptions vitali;
  DlvpOptions dlvp;
  std::vector<double> thresholds = geometric_thresholds(-4, 10);

  /// Fields for `evaluate`.
  std::optional<DiscreteField> v;
  std::optional<double> convexity_c;

  std::size_t term_index() const { return n.value_or(schedule.back()); }
};

/// Validates `j` against schema 1. `experiment_hint` picks experiment
/// specific defaults (the CKP sweep defaults to N = 2^12). Throws
/// ConfigError naming the offending key.
ExperimentConfig config_from_json(const nlohmann::json& j,
                                  const std::string& experiment_hint = "");

ExperimentConfig load_config(const std::string& path,
                             const std::string& experiment_hint = "");

}  // namespace relent
