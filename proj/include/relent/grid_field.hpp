#pragma once

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "relent/error.hpp"

namespace relent {

/// Uniform partition of the interval (a, b) into `cells` cells. Cell i
/// covers [a + i dx, a + (i + 1) dx).
struct Grid {
  double a = 0.0;
  double b = 1.0;
  std::size_t cells = 1;

  double dx() const noexcept { return (b - a) / static_cast<double>(cells); }
  double left(std::size_t i) const noexcept {
    return a + static_cast<double>(i) * dx();
  }
  double right(std::size_t i) const noexcept { return left(i + 1); }
  double midpoint(std::size_t i) const noexcept {
    return a + (static_cast<double>(i) + 0.5) * dx();
  }
  double length() const noexcept { return b - a; }

  bool operator==(const Grid&) const = default;
};

Grid build_uniform_grid(double a, double b, std::size_t cells);

/// Neumaier-compensated running sum. All Riemann sums in the library go
/// through this so that cell-constant integrands integrate to the last bit
/// whenever the exact sum is representable.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

/// Cell-averaged field on a Grid with values in R^n, stored cell-major.
class DiscreteField {
 public:
  DiscreteField(Grid grid, std::size_t components, std::vector<double> values);

  static DiscreteField constant(const Grid& grid, double value);
  static DiscreteField constant(const Grid& grid,
                                std::span<const double> value);

  /// Scalar field with value `f(i)` in cell i.
  template <class F>
  static DiscreteField from_cells(const Grid& grid, F&& f) {
    std::vector<double> v(grid.cells);
    for (std::size_t i = 0; i < grid.cells; ++i) v[i] = f(i);
    return DiscreteField(grid, 1, std::move(v));
  }

  /// Cell averages of a function given through its antiderivative.
  template <class Primitive>
  static DiscreteField from_primitive(const Grid& grid, Primitive&& prim) {
    const double dx = grid.dx();
    return from_cells(grid, [&](std::size_t i) {
      return (prim(grid.right(i)) - prim(grid.left(i))) / dx;
    });
  }

  /// Cell averages of c0 + c1 x, i.e. the affine function at the midpoint.
  static DiscreteField affine(const Grid& grid, double c0, double c1);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t components() const noexcept { return components_; }
  std::size_t size() const noexcept { return grid_.cells; }
  bool is_scalar() const noexcept { return components_ == 1; }

  std::span<const double> operator[](std::size_t i) const noexcept {
    return {values_.data() + i * components_, components_};
  }
  double scalar(std::size_t i) const noexcept { return values_[i * components_]; }

  /// Flat cell-major storage.
  std::span<const double> values() const noexcept { return values_; }

  bool same_layout(const DiscreteField& other) const noexcept {
    return grid_ == other.grid_ && components_ == other.components_;
  }

 private:
  Grid grid_;
  std::size_t components_;
  std::vector<double> values_;
};

void require_same_layout(const DiscreteField& lhs, const DiscreteField& rhs);

/// Euclidean norm of a cell value.
inline double magnitude(std::span<const double> v) noexcept {
  if (v.size() == 1) return std::fabs(v[0]);
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

/// Componentwise binary map over two fields on the same grid.
template <class Op>
DiscreteField combine(const DiscreteField& lhs, const DiscreteField& rhs,
                      Op&& op) {
  require_same_layout(lhs, rhs);
  auto a = lhs.values();
  auto b = rhs.values();
  std::vector<double> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = op(a[k], b[k]);
  return DiscreteField(lhs.grid(), lhs.components(), std::move(out));
}

/// Componentwise unary map.
template <class Op>
DiscreteField transform(const DiscreteField& field, Op&& op) {
  auto a = field.values();
  std::vector<double> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = op(a[k]);
  return DiscreteField(field.grid(), field.components(), std::move(out));
}

/// Scalar field obtained by applying `op` to every cell value.
template <class Op>
DiscreteField reduce_cells(const DiscreteField& field, Op&& op) {
  return DiscreteField::from_cells(field.grid(),
                                   [&](std::size_t i) { return op(field[i]); });
}

DiscreteField operator+(const DiscreteField& lhs, const DiscreteField& rhs);
DiscreteField operator-(const DiscreteField& lhs, const DiscreteField& rhs);
DiscreteField operator*(double s, const DiscreteField& field);

/// dx * sum_i values[i], per component.
std::vector<double> integrate(const DiscreteField& field);

/// Integral of a scalar field.
double integrate_scalar(const DiscreteField& field);

/// dx * sum_i |values[i]|^p.
double lp_norm_pow(const DiscreteField& field, double p);
double lp_norm(const DiscreteField& field, double p);
double lp_distance(const DiscreteField& lhs, const DiscreteField& rhs, double p);

double max_magnitude(const DiscreteField& field);
double min_component(const DiscreteField& field);

/// CSV with header `x_mid,v0[,v1,...]`, 17 significant digits.
void write_csv(std::ostream& out, const DiscreteField& field);

/// Reads the CSV written by write_csv. Without an explicit grid the grid is
/// inferred from the midpoints, which needs at least two rows.
DiscreteField read_csv(std::istream& in,
                       const std::optional<Grid>& grid = std::nullopt);

}  // namespace relent
