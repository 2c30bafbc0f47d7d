#include "relent/young_measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "relent/table.hpp"

namespace relent {

namespace {

constexpr std::size_t kMaxBins = std::size_t{1} << 20;

std::size_t window_cells(const Grid& grid, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("window width must be positive");
  const double q = width / grid.dx();
  const double r = std::round(q);
  if (r < 1.0 || std::fabs(q - r) > 1e-9 * std::max(1.0, q)) {
    throw AlignmentError("window width " + format_number(width) +
                         " is not a whole number of cells (dx = " +
                         format_number(grid.dx()) + ")");
  }
  const auto cpw = static_cast<std::size_t>(r);
  if (grid.cells % cpw != 0) {
    throw AlignmentError("window of " + std::to_string(cpw) +
                         " cells does not tile a grid of " + std::to_string(grid.cells) +
                         " cells");
  }
  return cpw;
}

}  // namespace

YoungMeasureEstimate estimate_young_measure(const DiscreteField& field,
                                            const YoungOptions& options) {
  return estimate_young_measure(sample_of({field}), options);
}

YoungMeasureEstimate estimate_young_measure(const SequenceSample& sample,
                                            const YoungOptions& options) {
  if (sample.size() == 0) throw std::invalid_argument("empty sample");
  const Grid grid = sample.grid();
  for (const auto& t : sample.terms) {
    if (!t.is_scalar()) throw DomainError("Young measure estimation needs scalar fields");
    if (!(t.grid() == grid)) throw GridMismatch("sample terms live on different grids");
  }
  const std::size_t cpw = window_cells(grid, options.window_width);
  const std::size_t n_windows = grid.cells / cpw;

  const std::size_t first = options.pool_terms ? 0 : sample.size() - 1;
  double vmin = sample.terms[first].scalar(0);
  double vmax = vmin;
  for (std::size_t t = first; t < sample.size(); ++t) {
    for (double v : sample.terms[t].values()) {
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
  }
  const double range = vmax - vmin;
  const double bw = options.bin_width > 0.0 ? options.bin_width : range / 64.0;
  std::size_t nbins = 1;
  if (range > 0.0) {
    if (!(bw > 0.0)) throw std::invalid_argument("bin width must be positive");
    const double q = range / bw;
    if (q > static_cast<double>(kMaxBins)) {
      throw std::invalid_argument("bin width too small for the observed value range");
    }
    nbins = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(q)));
  }
  std::vector<double> edges(nbins + 1);
  for (std::size_t k = 0; k <= nbins; ++k) {
    edges[k] = range > 0.0 ? vmin + static_cast<double>(k) * bw : vmin;
  }

  YoungMeasureEstimate ym;
  ym.field_grid = grid;
  ym.window_grid = build_uniform_grid(grid.a, grid.b, n_windows);
  ym.cells_per_window = cpw;
  ym.n_used = sample.indices.back();
  ym.bin_width = range > 0.0 ? bw : 0.0;
  ym.windows.reserve(n_windows);

  const double per_window = static_cast<double>(cpw * (sample.size() - first));
  std::vector<std::size_t> counts(nbins);
  std::vector<double> sums(nbins);
  for (std::size_t w = 0; w < n_windows; ++w) {
    std::fill(counts.begin(), counts.end(), 0);
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t t = first; t < sample.size(); ++t) {
      const auto& f = sample.terms[t];
      for (std::size_t i = w * cpw; i < (w + 1) * cpw; ++i) {
        const double v = f.scalar(i);
        std::size_t b = 0;
        if (range > 0.0) {
          b = std::min(nbins - 1, static_cast<std::size_t>((v - vmin) / bw));
        }
        ++counts[b];
        sums[b] += v;
      }
    }
    std::vector<Atom> atoms;
    Bins bins{edges, std::vector<double>(nbins, 0.0)};
    for (std::size_t b = 0; b < nbins; ++b) {
      if (counts[b] == 0) continue;
      const double weight = static_cast<double>(counts[b]) / per_window;
      if (weight > options.atom_threshold) {
        atoms.push_back({{sums[b] / static_cast<double>(counts[b])}, weight});
      } else {
        bins.weights[b] = weight;
      }
    }
    ym.windows.emplace_back(std::move(atoms), std::move(bins));
  }
  return ym;
}

nlohmann::json young_to_json(const YoungMeasureEstimate& ym) {
  nlohmann::json windows = nlohmann::json::array();
  for (std::size_t w = 0; w < ym.windows.size(); ++w) {
    nlohmann::json entry = measure_to_json(ym.windows[w]);
    entry["x_lo"] = ym.window_grid.left(w);
    entry["x_hi"] = ym.window_grid.right(w);
    windows.push_back(std::move(entry));
  }
  return {{"n_used", ym.n_used},
          {"bin_width", ym.bin_width},
          {"cells_per_window", ym.cells_per_window},
          {"windows", std::move(windows)}};
}

std::vector<DiscreteField> default_test_functions(const Grid& grid) {
  const double L = grid.length();
  const double w = std::numbers::pi / L;
  std::vector<DiscreteField> out;
  out.push_back(DiscreteField::constant(grid, 1.0));
  out.push_back(DiscreteField::affine(grid, 0.0, 1.0));
  out.push_back(DiscreteField::from_primitive(
      grid, [&](double x) { return -std::cos(w * (x - grid.a)) / w; }));
  // sin^2(pi t) = (1 - cos(2 pi t)) / 2
  out.push_back(DiscreteField::from_primitive(grid, [&](double x) {
    return 0.5 * (x - grid.a) - std::sin(2.0 * w * (x - grid.a)) / (4.0 * w);
  }));
  return out;
}

WeakLimitTable test_weak_limit(const SequenceSample& sample,
                               const std::function<double(double)>& f,
                               const YoungMeasureEstimate& ym,
                               std::span<const DiscreteField> test_functions) {
  const Grid& grid = ym.field_grid;
  std::vector<double> pairing(ym.windows.size());
  for (std::size_t w = 0; w < ym.windows.size(); ++w) pairing[w] = ym.windows[w].pair(f);

  // f(u_n) is evaluated once per term.
  std::vector<std::vector<double>> fu(sample.size(), std::vector<double>(grid.cells));
  for (std::size_t t = 0; t < sample.size(); ++t) {
    const auto& term = sample.terms[t];
    if (!(term.grid() == grid) || !term.is_scalar()) {
      throw GridMismatch("sample does not match the Young measure grid");
    }
    for (std::size_t i = 0; i < grid.cells; ++i) fu[t][i] = f(term.scalar(i));
  }

  WeakLimitTable table;
  const double dx = grid.dx();
  for (std::size_t k = 0; k < test_functions.size(); ++k) {
    const auto& phi = test_functions[k];
    if (!(phi.grid() == grid) || !phi.is_scalar()) {
      throw GridMismatch("test function does not match the sample grid");
    }
    CompensatedSum target;
    for (std::size_t i = 0; i < grid.cells; ++i) {
      target.add(phi.scalar(i) * pairing[ym.window_of(i)]);
    }
    const double limit = dx * target.value();
    std::vector<double> errs;
    for (std::size_t t = 0; t < sample.size(); ++t) {
      CompensatedSum s;
      for (std::size_t i = 0; i < grid.cells; ++i) s.add(fu[t][i] * phi.scalar(i));
      const double err = std::fabs(dx * s.value() - limit);
      errs.push_back(err);
      table.rows.push_back({k, sample.indices[t], err});
    }
    table.final_errors.push_back(errs.back());
    table.nonincreasing.push_back(errs.back() <= errs.front());
  }
  return table;
}

ConcentrationEstimate estimate_concentration(const SequenceSample& sample,
                                             const EntropySpec& h,
                                             const YoungMeasureEstimate& ym,
                                             const ConcentrationOptions& options) {
  const auto& term = sample.last();
  const Grid& grid = ym.field_grid;
  if (!(term.grid() == grid)) throw GridMismatch("sample does not match the Young measure grid");
  const double dx = grid.dx();
  const double window_len = dx * static_cast<double>(ym.cells_per_window);
  auto hf = [&](double x) { return eval_h(h, x); };

  ConcentrationEstimate est;
  est.n_used = sample.indices.back();
  est.window_excess.resize(ym.windows.size());
  CompensatedSum total;
  for (std::size_t w = 0; w < ym.windows.size(); ++w) {
    CompensatedSum s;
    for (std::size_t i = w * ym.cells_per_window; i < (w + 1) * ym.cells_per_window; ++i) {
      s.add(eval_h(h, term[i]));
    }
    const auto& nu = ym.windows[w];
    const double nu_h = nu.atomic_mass() >= options.regular_mass_threshold
                            ? nu.pair_atoms_normalized(hf)
                            : nu.pair(hf);
    double excess = dx * s.value() - window_len * nu_h;
    if (excess < -3.0 * options.noise_floor) est.estimator_failure = true;
    if (std::fabs(excess) < options.noise_floor) excess = 0.0;
    est.window_excess[w] = excess;
    total.add(excess);
  }
  est.total = total.value();
  est.peak_window = static_cast<std::size_t>(
      std::max_element(est.window_excess.begin(), est.window_excess.end()) -
      est.window_excess.begin());
  return est;
}

}  // namespace relent
