#include "relent/grid_field.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "relent/table.hpp"

namespace relent {

Grid build_uniform_grid(double a, double b, std::size_t cells) {
  if (!(std::isfinite(a) && std::isfinite(b)) || !(a < b)) {
    throw std::invalid_argument("grid requires finite a < b");
  }
  if (cells == 0) throw std::invalid_argument("grid requires at least one cell");
  return Grid{a, b, cells};
}

DiscreteField::DiscreteField(Grid grid, std::size_t components,
                             std::vector<double> values)
    : grid_(grid), components_(components), values_(std::move(values)) {
  if (components_ == 0) {
    throw std::invalid_argument("field needs at least one component");
  }
  if (values_.size() != grid_.cells * components_) {
    throw std::invalid_argument("field has " + std::to_string(values_.size()) +
                                " values, grid needs " +
                                std::to_string(grid_.cells * components_));
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw std::invalid_argument("non-finite field value in cell " +
                                  std::to_string(k / components_));
    }
  }
}

DiscreteField DiscreteField::constant(const Grid& grid, double value) {
  return DiscreteField(grid, 1, std::vector<double>(grid.cells, value));
}

DiscreteField DiscreteField::constant(const Grid& grid,
                                      std::span<const double> value) {
  std::vector<double> v;
  v.reserve(grid.cells * value.size());
  for (std::size_t i = 0; i < grid.cells; ++i) {
    v.insert(v.end(), value.begin(), value.end());
  }
  return DiscreteField(grid, value.size(), std::move(v));
}

DiscreteField DiscreteField::affine(const Grid& grid, double c0, double c1) {
  return from_cells(grid,
                    [&](std::size_t i) { return c0 + c1 * grid.midpoint(i); });
}

void require_same_layout(const DiscreteField& lhs, const DiscreteField& rhs) {
  if (!(lhs.grid() == rhs.grid())) throw GridMismatch("fields live on different grids");
  if (lhs.components() != rhs.components()) {
    throw GridMismatch("fields have different component counts");
  }
}

DiscreteField operator+(const DiscreteField& lhs, const DiscreteField& rhs) {
  return combine(lhs, rhs, [](double x, double y) { return x + y; });
}

DiscreteField operator-(const DiscreteField& lhs, const DiscreteField& rhs) {
  return combine(lhs, rhs, [](double x, double y) { return x - y; });
}

DiscreteField operator*(double s, const DiscreteField& field) {
  return transform(field, [s](double x) { return s * x; });
}

std::vector<double> integrate(const DiscreteField& field) {
  std::vector<CompensatedSum> sums(field.components());
  for (std::size_t i = 0; i < field.size(); ++i) {
    auto v = field[i];
    for (std::size_t c = 0; c < v.size(); ++c) sums[c].add(v[c]);
  }
  std::vector<double> out(field.components());
  const double dx = field.grid().dx();
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = dx * sums[c].value();
  return out;
}

double integrate_scalar(const DiscreteField& field) {
  if (!field.is_scalar()) throw std::invalid_argument("integrate_scalar needs a scalar field");
  return integrate(field)[0];
}

double lp_norm_pow(const DiscreteField& field, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("L^p norm requires p >= 1");
  CompensatedSum s;
  for (std::size_t i = 0; i < field.size(); ++i) {
    s.add(std::pow(magnitude(field[i]), p));
  }
  return field.grid().dx() * s.value();
}

double lp_norm(const DiscreteField& field, double p) {
  return std::pow(lp_norm_pow(field, p), 1.0 / p);
}

double lp_distance(const DiscreteField& lhs, const DiscreteField& rhs, double p) {
  return lp_norm(lhs - rhs, p);
}

double max_magnitude(const DiscreteField& field) {
  double m = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) m = std::max(m, magnitude(field[i]));
  return m;
}

double min_component(const DiscreteField& field) {
  auto v = field.values();
  return *std::min_element(v.begin(), v.end());
}

void write_csv(std::ostream& out, const DiscreteField& field) {
  out << "x_mid";
  for (std::size_t c = 0; c < field.components(); ++c) out << ",v" << c;
  out << '\n';
  for (std::size_t i = 0; i < field.size(); ++i) {
    out << format_number(field.grid().midpoint(i));
    for (double x : field[i]) out << ',' << format_number(x);
    out << '\n';
  }
}

DiscreteField read_csv(std::istream& in, const std::optional<Grid>& grid) {
  const Table t = Table::read(in);
  const auto& header = t.header();
  if (header.size() < 2 || header[0] != "x_mid") {
    throw Error("field CSV must start with header x_mid,v0,...");
  }
  const std::size_t components = header.size() - 1;
  for (std::size_t c = 0; c < components; ++c) {
    if (header[c + 1] != "v" + std::to_string(c)) {
      throw Error("unexpected field CSV column '" + header[c + 1] + "'");
    }
  }
  const auto mids = t.numeric_column("x_mid");
  if (mids.empty()) throw Error("field CSV has no rows");

  Grid g;
  if (grid) {
    g = *grid;
    if (g.cells != mids.size()) {
      throw GridMismatch("field CSV has " + std::to_string(mids.size()) +
                         " rows, grid has " + std::to_string(g.cells) + " cells");
    }
  } else {
    if (mids.size() < 2) throw Error("cannot infer a grid from a single row");
    const double dx = (mids.back() - mids.front()) / static_cast<double>(mids.size() - 1);
    g = build_uniform_grid(mids.front() - 0.5 * dx, mids.back() + 0.5 * dx, mids.size());
  }

  std::vector<double> values;
  values.reserve(mids.size() * components);
  std::vector<std::vector<double>> cols;
  for (std::size_t c = 0; c < components; ++c) {
    cols.push_back(t.numeric_column(header[c + 1]));
  }
  for (std::size_t i = 0; i < mids.size(); ++i) {
    for (std::size_t c = 0; c < components; ++c) values.push_back(cols[c][i]);
  }
  return DiscreteField(g, components, std::move(values));
}

}  // namespace relent
