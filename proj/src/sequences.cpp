#include "relent/sequences.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

#include "relent/table.hpp"

namespace relent {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::size_t whole_cells(double length, double dx, const std::string& what) {
  const double q = length / dx;
  const double r = std::round(q);
  if (std::fabs(q - r) > 1e-9 * std::max(1.0, q)) {
    throw AlignmentError(what + " spans " + format_number(q) +
                         " cells; it must be a whole number of cells");
  }
  return static_cast<std::size_t>(r);
}

DiscreteField oscillation_term(const Oscillation& o, std::size_t n, const Grid& grid) {
  if (!(o.duty > 0.0 && o.duty < 1.0)) {
    throw std::invalid_argument("oscillation duty fraction must lie in (0, 1)");
  }
  if (grid.cells % n != 0) {
    throw AlignmentError("oscillation period needs N divisible by n (N = " +
                         std::to_string(grid.cells) + ", n = " + std::to_string(n) + ")");
  }
  const std::size_t period = grid.cells / n;
  const std::size_t on = whole_cells(o.duty * static_cast<double>(period), 1.0,
                                     "oscillation duty part of a period");
  if (on == 0 || on == period) {
    throw AlignmentError("oscillation period of " + std::to_string(period) +
                         " cells is too short to resolve the duty fraction");
  }
  return DiscreteField::from_cells(grid, [&](std::size_t i) {
    return i % period < on ? o.value_on : o.value_off;
  });
}

DiscreteField spike_term(const ConcentrationSpike& s, std::size_t n, const Grid& grid) {
  if (!(s.p >= 1.0)) throw std::invalid_argument("spike exponent p must be >= 1");
  if (!(s.x0 > grid.a && s.x0 < grid.b)) {
    throw std::invalid_argument("spike location must be interior");
  }
  const double dx = grid.dx();
  const double width = 1.0 / static_cast<double>(n);
  const std::size_t start = whole_cells(s.x0 - grid.a, dx, "spike offset x0 - a");
  const std::size_t len = whole_cells(width, dx, "spike width 1/n");
  if (len == 0) throw AlignmentError("spike width 1/n is narrower than a cell");
  if (start + len > grid.cells) {
    throw AlignmentError("spike [x0, x0 + 1/n) leaves the domain for n = " +
                         std::to_string(n));
  }
  const double height = std::pow(static_cast<double>(n), 1.0 / s.p) - s.shift;
  return DiscreteField::from_cells(grid, [&](std::size_t i) {
    return i >= start && i < start + len ? s.background + height : s.background;
  });
}

// Uniform double in [0, 1) from the top 53 bits.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

DiscreteField density_term(std::uint64_t seed, std::size_t n, const Grid& grid) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(n & 0xffffffffu),
                    static_cast<std::uint32_t>(n >> 32)};
  std::mt19937_64 rng(seq);
  constexpr int kDegree = 4;
  double amp[kDegree];
  double phase[kDegree];
  for (int k = 0; k < kDegree; ++k) {
    amp[k] = (3.0 * unit_uniform(rng) - 1.5) / (k + 1);
    phase[k] = 2.0 * std::numbers::pi * unit_uniform(rng);
  }
  auto raw = DiscreteField::from_cells(grid, [&](std::size_t i) {
    const double t = (grid.midpoint(i) - grid.a) / grid.length();
    double s = 0.0;
    for (int k = 0; k < kDegree; ++k) {
      s += amp[k] * std::cos(2.0 * std::numbers::pi * (k + 1) * t + phase[k]);
    }
    return std::exp(s);
  });
  return (1.0 / integrate_scalar(raw)) * raw;
}

}  // namespace

const char* family_name(const SequenceFamily& family) {
  return std::visit(overloaded{
                        [](const StrongPerturbation&) { return "strong"; },
                        [](const Oscillation&) { return "oscillation"; },
                        [](const ConcentrationSpike&) { return "spike"; },
                        [](const PositiveDensityPair&) { return "density_pair"; },
                    },
                    family);
}

DiscreteField materialize(const SequenceFamily& family, std::size_t n,
                          const Grid& grid) {
  if (n == 0) throw std::invalid_argument("sequence index n must be positive");
  return std::visit(
      overloaded{
          [&](const StrongPerturbation& s) {
            if (!(s.base.grid() == grid)) {
              throw GridMismatch("perturbation base lives on a different grid");
            }
            if (!(s.rate > 0.0)) throw std::invalid_argument("decay rate must be positive");
            const double scale = std::pow(static_cast<double>(n), -s.rate);
            return combine(s.base, s.direction,
                           [scale](double u, double w) { return u + scale * w; });
          },
          [&](const Oscillation& o) { return oscillation_term(o, n, grid); },
          [&](const ConcentrationSpike& s) { return spike_term(s, n, grid); },
          [&](const PositiveDensityPair& d) { return density_term(d.seed, n, grid); },
      },
      family);
}

std::pair<DiscreteField, DiscreteField> density_pair(std::uint64_t seed,
                                                     const Grid& grid) {
  return {density_term(seed, 1, grid), density_term(seed, 2, grid)};
}

SequenceSample sample(const SequenceFamily& family,
                      std::span<const std::size_t> schedule, const Grid& grid) {
  if (schedule.empty()) throw std::invalid_argument("empty sequence schedule");
  SequenceSample s;
  for (std::size_t n : schedule) {
    s.indices.push_back(n);
    s.terms.push_back(materialize(family, n, grid));
  }
  return s;
}

SequenceSample sample_of(std::vector<DiscreteField> terms) {
  if (terms.empty()) throw std::invalid_argument("empty sequence sample");
  SequenceSample s;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    if (!terms[k].same_layout(terms.front())) {
      throw GridMismatch("sequence terms live on different grids");
    }
    s.indices.push_back(k + 1);
  }
  s.terms = std::move(terms);
  return s;
}

DiscreteMeasure GroundTruth::young_measure_at(std::size_t cell) const {
  if (homogeneous_young) return *homogeneous_young;
  return DiscreteMeasure::dirac(weak_limit[cell]);
}

double GroundTruth::concentration_mass() const {
  double s = 0.0;
  for (const auto& a : concentration) s += a.mass;
  return s;
}

std::optional<GroundTruth> ground_truth(const SequenceFamily& family,
                                        const EntropySpec& h, const Grid& grid) {
  return std::visit(
      overloaded{
          [&](const StrongPerturbation& s) -> std::optional<GroundTruth> {
            if (!(s.base.grid() == grid)) return std::nullopt;
            try {
              for (std::size_t i = 0; i < s.base.size(); ++i) eval_h(h, s.base[i]);
            } catch (const DomainError&) {
              return std::nullopt;
            }
            return GroundTruth{s.base, std::nullopt, {}, true};
          },
          [&](const Oscillation& o) -> std::optional<GroundTruth> {
            if (h.is<CustomEntropy>()) return std::nullopt;
            if (h.log_type() && (o.value_on < 0.0 || o.value_off < 0.0)) return std::nullopt;
            std::vector<Atom> atoms;
            if (o.value_on == o.value_off) {
              atoms.push_back({{o.value_on}, 1.0});
            } else {
              atoms.push_back({{o.value_on}, o.duty});
              atoms.push_back({{o.value_off}, 1.0 - o.duty});
            }
            const double mean = o.duty * o.value_on + (1.0 - o.duty) * o.value_off;
            return GroundTruth{DiscreteField::constant(grid, mean),
                               DiscreteMeasure(std::move(atoms)),
                               {},
                               o.value_on == o.value_off};
          },
          [&](const ConcentrationSpike& s) -> std::optional<GroundTruth> {
            if (h.is<CustomEntropy>()) return std::nullopt;
            // p = 1 spikes keep unit L^1 mass and have no weak L^1 limit.
            if (!(s.p > 1.0)) return std::nullopt;
            if (h.log_type() && s.background < 0.0) return std::nullopt;
            std::vector<ConcentrationAtom> conc;
            if (!h.log_type()) {
              const double q = h.growth_exponent();
              if (q > s.p) return std::nullopt;  // int h(u_n) is unbounded
              if (q == s.p) conc.push_back({s.x0, 1.0});
            }
            const bool strong = conc.empty();
            return GroundTruth{DiscreteField::constant(grid, s.background),
                               DiscreteMeasure::dirac(s.background), std::move(conc),
                               strong};
          },
          [&](const PositiveDensityPair&) -> std::optional<GroundTruth> {
            return std::nullopt;
          },
      },
      family);
}

namespace {

double number_at(const nlohmann::json& j, const std::string& name,
                 const std::string& key, std::optional<double> fallback = std::nullopt) {
  if (!j.contains(name)) {
    if (fallback) return *fallback;
    throw ConfigError(key + "." + name, "missing");
  }
  if (!j[name].is_number()) throw ConfigError(key + "." + name, "must be a number");
  return j[name].get<double>();
}

}  // namespace

DiscreteField field_from_json(const nlohmann::json& j, const Grid& grid,
                              const std::string& key) {
  if (j.is_number()) return DiscreteField::constant(grid, j.get<double>());
  if (!j.is_object()) throw ConfigError(key, "field must be a number or an object");
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw ConfigError(key + ".kind", "missing or not a string");
  }
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "constant") {
    return DiscreteField::constant(grid, number_at(j, "value", key));
  }
  if (kind == "x") return DiscreteField::affine(grid, 0.0, 1.0);
  if (kind == "affine") {
    return DiscreteField::affine(grid, number_at(j, "c0", key, 0.0),
                                 number_at(j, "c1", key, 0.0));
  }
  if (kind == "sine") {
    const double amp = number_at(j, "amplitude", key, 1.0);
    const double freq = number_at(j, "frequency", key, 1.0);
    const double offset = number_at(j, "offset", key, 0.0);
    if (freq == 0.0) throw ConfigError(key + ".frequency", "must be nonzero");
    const double w = freq * std::numbers::pi;
    // Exact cell averages of offset + amp sin(freq pi x).
    return DiscreteField::from_primitive(
        grid, [&](double x) { return offset * x - amp * std::cos(w * x) / w; });
  }
  if (kind == "csv") {
    if (!j.contains("path") || !j["path"].is_string()) {
      throw ConfigError(key + ".path", "missing or not a string");
    }
    const std::string path = j["path"].get<std::string>();
    std::ifstream in(path);
    if (!in) throw ConfigError(key + ".path", "cannot open '" + path + "'");
    try {
      return read_csv(in, grid);
    } catch (const Error& e) {
      throw ConfigError(key + ".path", e.what());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(key + ".path", e.what());
    }
  }
  throw ConfigError(key + ".kind", "unknown field kind '" + kind + "'");
}

SequenceFamily sequence_from_json(const nlohmann::json& j, const Grid& grid,
                                  const std::string& key) {
  if (!j.is_object()) throw ConfigError(key, "must be an object");
  if (!j.contains("family") || !j["family"].is_string()) {
    throw ConfigError(key + ".family", "missing or not a string");
  }
  const std::string family = j["family"].get<std::string>();
  static const std::map<std::string, std::set<std::string>> kKeys = {
      {"strong", {"family", "u", "w", "alpha"}},
      {"oscillation", {"family", "a", "b", "theta"}},
      {"spike", {"family", "p", "x0", "background", "shift"}},
      {"density_pair", {"family", "seed"}}};
  if (const auto it = kKeys.find(family); it != kKeys.end()) {
    for (auto k = j.begin(); k != j.end(); ++k) {
      if (!it->second.count(k.key())) throw ConfigError(key + "." + k.key(), "unknown key");
    }
  }
  if (family == "strong") {
    if (!j.contains("u")) throw ConfigError(key + ".u", "missing");
    if (!j.contains("w")) throw ConfigError(key + ".w", "missing");
    StrongPerturbation s{field_from_json(j["u"], grid, key + ".u"),
                         field_from_json(j["w"], grid, key + ".w"),
                         number_at(j, "alpha", key, 1.0)};
    if (!(s.rate > 0.0)) throw ConfigError(key + ".alpha", "must be positive");
    if (!s.base.same_layout(s.direction)) {
      throw ConfigError(key + ".w", "component count differs from u");
    }
    return s;
  }
  if (family == "oscillation") {
    Oscillation o{number_at(j, "a", key, 0.0), number_at(j, "b", key, 1.0),
                  number_at(j, "theta", key, 0.5)};
    if (!(o.duty > 0.0 && o.duty < 1.0)) throw ConfigError(key + ".theta", "must lie in (0, 1)");
    return o;
  }
  if (family == "spike") {
    ConcentrationSpike s{number_at(j, "p", key, 2.0), number_at(j, "x0", key, 0.5),
                         number_at(j, "background", key, 0.0),
                         number_at(j, "shift", key, 0.0)};
    if (!(s.p >= 1.0)) throw ConfigError(key + ".p", "must be >= 1");
    if (!(s.x0 > grid.a && s.x0 < grid.b)) throw ConfigError(key + ".x0", "must be interior");
    if (s.background < 0.0) throw ConfigError(key + ".background", "must be >= 0");
    return s;
  }
  if (family == "density_pair") {
    if (j.contains("seed") && !j["seed"].is_number_integer()) {
      throw ConfigError(key + ".seed", "must be an integer");
    }
    return PositiveDensityPair{j.value("seed", std::uint64_t{0})};
  }
  throw ConfigError(key + ".family", "unknown sequence family '" + family + "'");
}

}  // namespace relent
