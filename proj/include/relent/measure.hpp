#pragma once

#include <optional>
#include <span>
#include <vector>

#include "json.hpp"

namespace relent {

struct Atom {
  std::vector<double> location;
  double weight = 0.0;
};

/// Histogram part of a measure: bin i covers [edges[i], edges[i+1]) and
/// carries weights[i], paired at the bin centre.
struct Bins {
  std::vector<double> edges;
  std::vector<double> weights;

  double center(std::size_t i) const { return 0.5 * (edges[i] + edges[i + 1]); }
};

/// Finitely supported measure: atoms plus an optional binned continuum.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  DiscreteMeasure(std::vector<Atom> atoms, std::optional<Bins> bins = std::nullopt);

  static DiscreteMeasure dirac(double location);
  static DiscreteMeasure dirac(std::span<const double> location);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const std::optional<Bins>& bins() const noexcept { return bins_; }

  double total_mass() const;
  double atomic_mass() const;
  bool is_probability(double tolerance = 1e-10) const;

  /// Sum of weights of atoms whose (scalar) location lies within `radius`.
  double mass_near(double location, double radius) const;

  /// int f dnu for scalar measures.
  template <class F>
  double pair(F&& f) const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.weight * f(a.location[0]);
    if (bins_) {
      for (std::size_t i = 0; i < bins_->weights.size(); ++i) {
        if (bins_->weights[i] != 0.0) s += bins_->weights[i] * f(bins_->center(i));
      }
    }
    return s;
  }

  /// Pairing against the atoms only, renormalized to unit mass.
  template <class F>
  double pair_atoms_normalized(F&& f) const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.weight * f(a.location[0]);
    return s / atomic_mass();
  }

  /// Cumulative distribution function of a scalar measure.
  double cdf(double x) const;

 private:
  std::vector<Atom> atoms_;
  std::optional<Bins> bins_;
};

/// Wasserstein-1 distance between two scalar measures, integrating
/// |F - G| over the union of their supports.
double wasserstein1(const DiscreteMeasure& lhs, const DiscreteMeasure& rhs);

/// `{atoms: [{loc, w}], bins: {edges, weights}}`; scalar locations are
/// written as numbers.
nlohmann::json measure_to_json(const DiscreteMeasure& m);

}  // namespace relent
