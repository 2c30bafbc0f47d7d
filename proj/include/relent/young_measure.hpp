#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "relent/entropy.hpp"
#include "relent/grid_field.hpp"
#include "relent/measure.hpp"
#include "relent/sequences.hpp"

namespace relent {

struct YoungOptions {
  /// Spatial window width; must be a whole number of cells and divide the
  /// domain into whole windows.
  double window_width = 1.0 / 16.0;
  /// Value-bin width; 0 selects 1/64 of the observed value range.
  double bin_width = 0.0;
  /// Bins heavier than this are reported as atoms at their centroid.
  double atom_threshold = 0.25;
  /// Pool the cell values of every provided term instead of using only the
  /// last (largest n) one.
  bool pool_terms = false;
};

/// Per-window empirical Young measure of a scalar field.
struct YoungMeasureEstimate {
  Grid field_grid;
  /// One coarse cell per window.
  Grid window_grid;
  std::size_t cells_per_window = 1;
  std::vector<DiscreteMeasure> windows;
  std::size_t n_used = 0;
  double bin_width = 0.0;

  std::size_t window_of(std::size_t cell) const noexcept {
    return cell / cells_per_window;
  }
};

YoungMeasureEstimate estimate_young_measure(const DiscreteField& field,
                                            const YoungOptions& options = {});
YoungMeasureEstimate estimate_young_measure(const SequenceSample& sample,
                                            const YoungOptions& options = {});

/// `{"n_used", "bin_width", "windows": [{x_lo, x_hi, atoms, bins}]}`.
nlohmann::json young_to_json(const YoungMeasureEstimate& ym);

/// The default test functions: 1, x, sin(pi t) and the bump sin^2(pi t),
/// t = (x - a)/(b - a), as exact cell averages.
std::vector<DiscreteField> default_test_functions(const Grid& grid);

struct WeakLimitRow {
  std::size_t test_function = 0;
  std::size_t n = 0;
  double error = 0.0;
};

struct WeakLimitTable {
  std::vector<WeakLimitRow> rows;
  /// Error at the largest n, per test function.
  std::vector<double> final_errors;
  /// Error did not grow from the first to the last term, per test function.
  std::vector<bool> nonincreasing;
};

/// |int f(u_n) phi - int <nu, f> phi| for every term and test function,
/// with <nu, f> taken window by window from `ym`.
WeakLimitTable test_weak_limit(const SequenceSample& sample,
                               const std::function<double(double)>& f,
                               const YoungMeasureEstimate& ym,
                               std::span<const DiscreteField> test_functions);

struct ConcentrationOptions {
  /// Windows with |excess| below this are zeroed.
  double noise_floor = 1e-8;
  /// Windows whose atoms hold at least this much mass pair h against the
  /// atoms alone; the light continuum there is the concentrating part.
  double regular_mass_threshold = 0.75;
};

struct ConcentrationEstimate {
  std::vector<double> window_excess;
  double total = 0.0;
  std::size_t n_used = 0;
  /// Window with the largest excess.
  std::size_t peak_window = 0;
  /// Some window went below -3 noise floors.
  bool estimator_failure = false;
};

/// Excess int_w h(u_n) - int_w <nu, h> per window at the largest n.
ConcentrationEstimate estimate_concentration(const SequenceSample& sample,
                                             const EntropySpec& h,
                                             const YoungMeasureEstimate& ym,
                                             const ConcentrationOptions& options = {});

}  // namespace relent
