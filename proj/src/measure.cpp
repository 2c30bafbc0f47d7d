#include "relent/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace relent {

namespace {

// Mass of the measure on (-inf, x] (inclusive) or (-inf, x) otherwise.
// Bin mass is spread uniformly over its bin.
double cumulative(const DiscreteMeasure& m, double x, bool inclusive) {
  double s = 0.0;
  for (const auto& a : m.atoms()) {
    const double loc = a.location[0];
    if (loc < x || (inclusive && loc == x)) s += a.weight;
  }
  if (const auto& b = m.bins()) {
    for (std::size_t i = 0; i < b->weights.size(); ++i) {
      const double lo = b->edges[i];
      const double hi = b->edges[i + 1];
      if (x >= hi) {
        s += b->weights[i];
      } else if (x > lo && hi > lo) {
        s += b->weights[i] * (x - lo) / (hi - lo);
      }
    }
  }
  return s;
}

void collect_breakpoints(const DiscreteMeasure& m, std::vector<double>& pts) {
  for (const auto& a : m.atoms()) pts.push_back(a.location[0]);
  if (const auto& b = m.bins()) {
    for (std::size_t i = 0; i < b->weights.size(); ++i) {
      if (b->weights[i] != 0.0) {
        pts.push_back(b->edges[i]);
        pts.push_back(b->edges[i + 1]);
      }
    }
  }
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms, std::optional<Bins> bins)
    : atoms_(std::move(atoms)), bins_(std::move(bins)) {
  for (const auto& a : atoms_) {
    if (!(a.weight >= 0.0)) throw std::invalid_argument("atom weights must be nonnegative");
    if (a.location.empty()) throw std::invalid_argument("atom needs a location");
  }
  if (bins_) {
    if (bins_->edges.size() != bins_->weights.size() + 1) {
      throw std::invalid_argument("bins need one more edge than weights");
    }
    for (double w : bins_->weights) {
      if (!(w >= 0.0)) throw std::invalid_argument("bin weights must be nonnegative");
    }
  }
}

DiscreteMeasure DiscreteMeasure::dirac(double location) {
  return DiscreteMeasure({Atom{{location}, 1.0}});
}

DiscreteMeasure DiscreteMeasure::dirac(std::span<const double> location) {
  return DiscreteMeasure({Atom{{location.begin(), location.end()}, 1.0}});
}

double DiscreteMeasure::atomic_mass() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.weight;
  return s;
}

double DiscreteMeasure::total_mass() const {
  double s = atomic_mass();
  if (bins_) {
    for (double w : bins_->weights) s += w;
  }
  return s;
}

bool DiscreteMeasure::is_probability(double tolerance) const {
  return std::fabs(total_mass() - 1.0) <= tolerance;
}

double DiscreteMeasure::mass_near(double location, double radius) const {
  double s = 0.0;
  for (const auto& a : atoms_) {
    if (std::fabs(a.location[0] - location) <= radius) s += a.weight;
  }
  return s;
}

double DiscreteMeasure::cdf(double x) const { return cumulative(*this, x, true); }

double wasserstein1(const DiscreteMeasure& lhs, const DiscreteMeasure& rhs) {
  std::vector<double> pts;
  collect_breakpoints(lhs, pts);
  collect_breakpoints(rhs, pts);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double x0 = pts[k];
    const double x1 = pts[k + 1];
    // F - G is affine on the open segment.
    const double a = cumulative(lhs, x0, true) - cumulative(rhs, x0, true);
    const double b = cumulative(lhs, x1, false) - cumulative(rhs, x1, false);
    const double len = x1 - x0;
    if (a * b >= 0.0) {
      total += 0.5 * len * (std::fabs(a) + std::fabs(b));
    } else {
      total += 0.5 * len * (a * a + b * b) / (std::fabs(a) + std::fabs(b));
    }
  }
  return total;
}

nlohmann::json measure_to_json(const DiscreteMeasure& m) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& a : m.atoms()) {
    nlohmann::json loc = a.location.size() == 1 ? nlohmann::json(a.location[0])
                                                : nlohmann::json(a.location);
    atoms.push_back({{"loc", loc}, {"w", a.weight}});
  }
  nlohmann::json out{{"atoms", atoms}};
  if (const auto& b = m.bins()) {
    out["bins"] = {{"edges", b->edges}, {"weights", b->weights}};
  } else {
    out["bins"] = {{"edges", nlohmann::json::array()},
                   {"weights", nlohmann::json::array()}};
  }
  return out;
}

}  // namespace relent
