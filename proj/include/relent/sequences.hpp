#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "relent/entropy.hpp"
#include "relent/grid_field.hpp"
#include "relent/measure.hpp"

namespace relent {

/// u_n = base + n^{-rate} direction.
struct StrongPerturbation {
  DiscreteField base;
  DiscreteField direction;
  double rate = 1.0;
};

/// Square wave of period (b - a)/n: `value_on` on the first `duty` fraction
/// of every period, `value_off` on the rest.
struct Oscillation {
  double value_on = 0.0;
  double value_off = 1.0;
  double duty = 0.5;
};

/// u_n = background + (n^{1/p} - shift) on [x0, x0 + 1/n), background
/// elsewhere. With shift 0 and background 0 the p-th power mass is 1.
struct ConcentrationSpike {
  double p = 2.0;
  double x0 = 0.5;
  double background = 0.0;
  double shift = 0.0;
};

/// Seeded stream of smooth, strictly positive, unit-mass densities:
/// normalized exp of a random trigonometric polynomial of degree 4. Term n
/// is the n-th draw of the stream.
struct PositiveDensityPair {
  std::uint64_t seed = 0;
};

using SequenceFamily = std::variant<StrongPerturbation, Oscillation,
                                    ConcentrationSpike, PositiveDensityPair>;

const char* family_name(const SequenceFamily& family);

/// n-th term as exact cell averages. Throws AlignmentError when the
/// period, width or offset does not fall on whole cells.
DiscreteField materialize(const SequenceFamily& family, std::size_t n,
                          const Grid& grid);

/// The first two draws of the seeded density stream.
std::pair<DiscreteField, DiscreteField> density_pair(std::uint64_t seed,
                                                     const Grid& grid);

/// A finite stretch of a sequence: terms[k] is u_{indices[k]}.
struct SequenceSample {
  std::vector<std::size_t> indices;
  std::vector<DiscreteField> terms;

  std::size_t size() const noexcept { return terms.size(); }
  const DiscreteField& last() const { return terms.back(); }
  const Grid& grid() const { return terms.front().grid(); }
};

SequenceSample sample(const SequenceFamily& family,
                      std::span<const std::size_t> schedule, const Grid& grid);

/// Wraps existing fields, indexed 1..k.
SequenceSample sample_of(std::vector<DiscreteField> terms);

struct ConcentrationAtom {
  double location = 0.0;
  double mass = 0.0;
};

/// Analytic limits of a catalog family for a given entropy.
struct GroundTruth {
  DiscreteField weak_limit;
  /// Spatially homogeneous Young measure; when absent, nu_x is the Dirac
  /// mass at the weak limit.
  std::optional<DiscreteMeasure> homogeneous_young;
  std::vector<ConcentrationAtom> concentration;
  bool strong_limit_exists = false;

  DiscreteMeasure young_measure_at(std::size_t cell) const;
  double concentration_mass() const;
};

/// Returns nullopt for pairs outside the analytic catalog (density
/// streams, custom entropies for oscillation/spike, unbounded entropy).
std::optional<GroundTruth> ground_truth(const SequenceFamily& family,
                                        const EntropySpec& h, const Grid& grid);

/// Field description: a number, or {"kind": "constant"|"affine"|"x"|"sine"|
/// "csv", ...}.
DiscreteField field_from_json(const nlohmann::json& j, const Grid& grid,
                              const std::string& key);

/// {"family": "strong"|"oscillation"|"spike"|"density_pair", ...}
SequenceFamily sequence_from_json(const nlohmann::json& j, const Grid& grid,
                                  const std::string& key = "sequence");

}  // namespace relent
