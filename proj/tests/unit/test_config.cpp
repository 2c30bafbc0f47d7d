#include "doctest.h"
#include "relent/config.hpp"

using namespace relent;
using nlohmann::json;

namespace {

std::string key_of(const json& j) {
  try {
    config_from_json(j);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

}  // namespace

TEST_CASE("defaults") {
  const auto cfg = config_from_json(json{{"schema", 1}});
  CHECK(cfg.grid.cells == 32768);
  CHECK(cfg.grid.a == 0.0);
  CHECK(cfg.grid.b == 1.0);
  CHECK(cfg.schedule.front() == 4);
  CHECK(cfg.schedule.back() == 1024);
  CHECK(cfg.term_index() == 1024);
  CHECK(cfg.trials == 10000);
  CHECK(cfg.vanish_tolerance == 1e-3);
  CHECK(cfg.atom_tolerance == 0.02);
  CHECK(cfg.concentration_tolerance == 0.05);
  CHECK(cfg.young.window_width == 1.0 / 16);
  CHECK_FALSE(cfg.entropy);
  CHECK_FALSE(cfg.sequence);

  const auto ckp = config_from_json(json{{"schema", 1}}, "ckp_sweep");
  CHECK(ckp.grid.cells == 4096);
  const auto named = config_from_json(json{{"schema", 1}, {"experiment", "ckp_sweep"}});
  CHECK(named.grid.cells == 4096);
}

TEST_CASE("parsed fields") {
  const json j = json::parse(R"({
    "schema": 1, "grid": {"a": -1, "b": 1, "N": 256},
    "entropy": {"family": "power", "p": 3},
    "sequence": {"family": "spike", "p": 3},
    "schedule": [2, 4], "n": 8, "vanish_tolerance": 1e-4,
    "estimator": {"window": 0.25, "pool": true},
    "tolerances": {"atom": 0.1},
    "vitali": {"epsilon": 0.5, "m_max": 3},
    "u": 2.0
  })");
  const auto cfg = config_from_json(j);
  CHECK(cfg.grid.cells == 256);
  CHECK(cfg.grid.a == -1.0);
  CHECK(cfg.entropy->name().rfind("power", 0) == 0);
  CHECK(std::holds_alternative<ConcentrationSpike>(*cfg.sequence));
  CHECK(cfg.schedule == std::vector<std::size_t>{2, 4});
  CHECK(cfg.term_index() == 8);
  CHECK(cfg.vitali.vanish_tolerance == 1e-4);
  CHECK(cfg.young.window_width == 0.25);
  CHECK(cfg.young.pool_terms);
  CHECK(cfg.atom_tolerance == 0.1);
  CHECK(*cfg.vitali.m_max == 3.0);
  REQUIRE(cfg.reference);
  CHECK(cfg.reference->scalar(17) == 2.0);
}

TEST_CASE("errors name the offending key") {
  CHECK(key_of(json::array()) == "<root>");
  CHECK(key_of(json{{"grid", {{"N", 4}}}}) == "schema");
  CHECK(key_of(json{{"schema", 2}}) == "schema");
  CHECK(key_of(json{{"schema", 1}, {"bogus", 1}}) == "bogus");
  CHECK(key_of(json{{"schema", 1}, {"grid", {{"N", 0}}}}) == "grid.N");
  CHECK(key_of(json{{"schema", 1}, {"grid", {{"a", 1}, {"b", 0}}}}) == "grid.b");
  CHECK(key_of(json{{"schema", 1}, {"grid", {{"M", 3}}}}) == "grid.M");
  CHECK(key_of(json{{"schema", 1}, {"schedule", json::array()}}) == "schedule");
  CHECK(key_of(json{{"schema", 1}, {"schedule", {4, 0}}}) == "schedule[1]");
  CHECK(key_of(json{{"schema", 1}, {"p", 0.5}}) == "p");
  CHECK(key_of(json{{"schema", 1}, {"trials", -3}}) == "trials");
  CHECK(key_of(json{{"schema", 1}, {"ckp_p", 3}}) == "ckp_p");
  CHECK(key_of(json{{"schema", 1}, {"estimator", {{"width", 1}}}}) == "estimator.width");
  CHECK(key_of(json{{"schema", 1}, {"tolerances", {{"atom", -1}}}}) == "tolerances.atom");
  CHECK(key_of(json{{"schema", 1}, {"thresholds", {2, 1}}}) == "thresholds");
  CHECK(key_of(json{{"schema", 1}, {"entropy", {{"family", "nope"}}}}).rfind("entropy", 0) == 0);
  CHECK(key_of(json{{"schema", 1}, {"sequence", {{"family", "nope"}}}}).rfind("sequence", 0) == 0);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("sequence keys are checked per family") {
  CHECK(key_of(json{{"schema", 1}, {"sequence", {{"family", "spike"}, {"amplitude", 3}}}}) ==
        "sequence.amplitude");
  CHECK(key_of(json{{"schema", 1}, {"sequence", {{"family", "oscillation"}, {"p", 2}}}}) ==
        "sequence.p");
  CHECK(key_of(json{{"schema", 1}, {"sequence", {{"family", "spike"}, {"x0", 1.5}}}}) ==
        "sequence.x0");
}
