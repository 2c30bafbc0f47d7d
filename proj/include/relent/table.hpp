#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace relent {

/// Shortest round-trip decimal form (at most 17 significant digits).
/// Infinities are written as `inf` / `-inf`.
std::string format_number(double x);

/// Parses the output of format_number (and plain decimals).
double parse_number(const std::string& text);

/// In-memory CSV table. Cells are numbers, integers, booleans (written as
/// 0/1) or strings without commas.
class Table {
 public:
  using Cell = std::variant<double, std::int64_t, bool, std::string>;

  Table() = default;
  explicit Table(std::vector<std::string> header);

  const std::vector<std::string>& header() const noexcept { return header_; }
  const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }

  void add_row(std::vector<Cell> row);

  std::size_t column_index(const std::string& name) const;
  /// Column as doubles; integers and booleans are converted.
  std::vector<double> numeric_column(const std::string& name) const;

  void write(std::ostream& out) const;
  std::string to_string() const;

  /// Reads a table back. Every cell that parses as a number is stored as a
  /// double; the rest are kept as strings.
  static Table read(std::istream& in);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
};

}  // namespace relent
