#include "relent/table.hpp"

#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "relent/error.hpp"

namespace relent {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  // %.17g round-trips every double; shorter forms are preferred when exact.
  for (int digits = 15; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

double parse_number(const std::string& text) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw Error("not a number: '" + text + "'");
  }
  if (used != text.size()) throw Error("not a number: '" + text + "'");
  return v;
}

Table::Table(std::vector<std::string> header) : header_(std::move(header)) {}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != header_.size()) {
    throw std::invalid_argument("row width does not match table header");
  }
  rows_.push_back(std::move(row));
}

std::size_t Table::column_index(const std::string& name) const {
  for (std::size_t k = 0; k < header_.size(); ++k) {
    if (header_[k] == name) return k;
  }
  throw Error("no column named '" + name + "'");
}

std::vector<double> Table::numeric_column(const std::string& name) const {
  const std::size_t k = column_index(name);
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& row : rows_) {
    const Cell& c = row[k];
    if (const auto* d = std::get_if<double>(&c)) {
      out.push_back(*d);
    } else if (const auto* i = std::get_if<std::int64_t>(&c)) {
      out.push_back(static_cast<double>(*i));
    } else if (const auto* b = std::get_if<bool>(&c)) {
      out.push_back(*b ? 1.0 : 0.0);
    } else {
      out.push_back(parse_number(std::get<std::string>(c)));
    }
  }
  return out;
}

namespace {

void write_cell(std::ostream& out, const Table::Cell& c) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          out << format_number(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          out << (v ? 1 : 0);
        } else {
          out << v;
        }
      },
      c);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) parts.push_back(cur);
  if (!line.empty() && line.back() == ',') parts.emplace_back();
  return parts;
}

}  // namespace

void Table::write(std::ostream& out) const {
  for (std::size_t k = 0; k < header_.size(); ++k) {
    if (k) out << ',';
    out << header_[k];
  }
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out << ',';
      write_cell(out, row[k]);
    }
    out << '\n';
  }
}

std::string Table::to_string() const {
  std::ostringstream ss;
  write(ss);
  return ss.str();
}

Table Table::read(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("empty CSV input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  Table t(split_line(line));
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto parts = split_line(line);
    if (parts.size() != t.header_.size()) {
      throw Error("CSV row has " + std::to_string(parts.size()) +
                  " fields, header has " + std::to_string(t.header_.size()));
    }
    std::vector<Cell> row;
    row.reserve(parts.size());
    for (auto& p : parts) {
      try {
        row.emplace_back(parse_number(p));
      } catch (const Error&) {
        row.emplace_back(std::move(p));
      }
    }
    t.rows_.push_back(std::move(row));
  }
  return t;
}

}  // namespace relent
