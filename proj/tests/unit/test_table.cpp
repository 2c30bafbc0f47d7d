#include <cmath>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "relent/error.hpp"
#include "relent/table.hpp"
#include "testing.hpp"

using namespace relent;

TEST_CASE("format_number round trips") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(0.25) == "0.25");
  CHECK(format_number(1e-300) == "1e-300");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(std::isnan(parse_number(format_number(NAN))));
  relent::testing::for_all(3, 1000, [](relent::testing::Gen& g, std::size_t) {
    const double x = g.uniform(-1, 1) * std::pow(10.0, g.uniform(-200, 200));
    CHECK(parse_number(format_number(x)) == x);
  });
  CHECK_THROWS_AS(parse_number("abc"), Error);
  CHECK_THROWS_AS(parse_number("1.5x"), Error);
}

TEST_CASE("table write and read") {
  Table t({"n", "name", "value", "ok"});
  t.add_row({std::int64_t{4}, std::string("a"), 0.5, true});
  t.add_row({std::int64_t{8}, std::string("b"), 1e-20, false});
  CHECK_THROWS_AS(t.add_row({1.0}), std::invalid_argument);
  const std::string text = t.to_string();
  CHECK(text == "n,name,value,ok\n4,a,0.5,1\n8,b,1e-20,0\n");
  std::stringstream in(text);
  const Table back = Table::read(in);
  CHECK(back.size() == 2);
  CHECK(back.numeric_column("value")[1] == 1e-20);
  CHECK(back.numeric_column("ok")[0] == 1.0);
  CHECK(std::get<std::string>(back.rows()[1][1]) == "b");
  CHECK_THROWS_AS(back.column_index("missing"), Error);
  CHECK_THROWS_AS(back.numeric_column("name"), Error);
}
