#include <cfloat>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "relent/experiments.hpp"

using namespace relent;
using nlohmann::json;

namespace {

ExperimentConfig cfg_of(const std::string& text, const std::string& hint = "") {
  return config_from_json(json::parse(text), hint);
}

std::string csv_of(const ExperimentReport& r) {
  std::ostringstream out;
  r.table.write(out);
  return out.str();
}

Table reread(const ExperimentReport& r) {
  std::istringstream in(csv_of(r));
  return Table::read(in);
}

const char* kStrong =
    R"({"schema":1,"entropy":{"family":"quadratic"},)"
    R"("sequence":{"family":"strong","u":{"kind":"x"},"w":1,"alpha":1}})";

}  // namespace

TEST_CASE("equivalence_p on the strong family") {
  const auto r = run_equivalence_p(cfg_of(kStrong));
  CHECK(r.passed);
  CHECK(r.table.size() == 9);
  const auto n = r.table.numeric_column("n");
  const auto rel = r.table.numeric_column("rel_entropy");
  const auto lp = r.table.numeric_column("lp_distance");
  for (std::size_t k = 0; k < n.size(); ++k) {
    CHECK(rel[k] == doctest::Approx(1.0 / (n[k] * n[k])).epsilon(1e-12));
    CHECK(lp[k] == doctest::Approx(1.0 / n[k]).epsilon(1e-12));
  }
  CHECK(rel.back() < 1e-3);
  CHECK(lp.back() < 1e-3);
  for (const auto& q : r.verdict["ratios"]) CHECK(std::fabs(q.get<double>() - 4.0) <= 0.4);

  // The verdict depends only on the table and the echoed parameters.
  EquivalenceParams params;
  params.expect_vanishing = true;
  params.ratio_target = 4.0;
  auto again = summarize_equivalence(reread(r), params);
  auto original = r.verdict;
  original.erase("params");
  again.erase("params");
  CHECK(again == original);
  CHECK(csv_of(r) == csv_of(run_equivalence_p(cfg_of(kStrong))));
}

TEST_CASE("equivalence_p on oscillation and spike") {
  const auto osc = run_equivalence_p(cfg_of(
      R"({"schema":1,"entropy":{"family":"quadratic"},"sequence":{"family":"oscillation","a":0,"b":1,"theta":0.5}})"));
  CHECK(osc.passed);
  CHECK_FALSE(osc.verdict["rel_entropy_vanishes"].get<bool>());
  for (double x : osc.table.numeric_column("rel_entropy")) CHECK(x == 0.25);
  for (double x : osc.table.numeric_column("lp_distance")) CHECK(x == 0.5);

  const auto sp = run_equivalence_p(cfg_of(
      R"({"schema":1,"entropy":{"family":"quadratic"},"sequence":{"family":"spike","p":2}})"));
  CHECK(sp.passed);
  for (double x : sp.table.numeric_column("rel_entropy")) CHECK(std::fabs(x - 1.0) <= 4 * DBL_EPSILON);
  // Once the spike fits inside one window the excess carries all of it.
  const auto conc = sp.table.numeric_column("concentration_total");
  CHECK(std::fabs(conc.back() - 1.0) <= 0.05);
  for (double x : osc.table.numeric_column("concentration_total")) CHECK(std::fabs(x) <= 0.05);
  CHECK(sp.verdict["consistent"].get<bool>());
}

TEST_CASE("equivalence_p rejects bad inputs") {
  CHECK_THROWS_AS(run_equivalence_p(cfg_of(R"({"schema":1,"sequence":{"family":"spike","p":2}})")),
                  ConfigError);
  // Quadratic does not satisfy the growth bounds at p = 4.
  CHECK_THROWS_AS(run_equivalence_p(cfg_of(
                      R"({"schema":1,"p":4,"entropy":{"family":"quadratic"},"sequence":{"family":"spike","p":2}})")),
                  ValidationError);
  CHECK_THROWS_AS(run_equivalence_p(cfg_of(
                      R"({"schema":1,"grid":{"N":1000},"schedule":[3],"entropy":{"family":"quadratic"},"sequence":{"family":"oscillation","a":0,"b":1,"theta":0.5}})")),
                  ConfigError);
}

TEST_CASE("l1_xlogx") {
  const auto sine = run_l1_xlogx(cfg_of(
      R"({"schema":1,"sequence":{"family":"strong","u":1,"w":{"kind":"sine","amplitude":1,"frequency":2},"alpha":1},"clip_floor":1e-6})"));
  CHECK(sine.passed);
  CHECK(sine.verdict["theorem_applies"].get<bool>());
  CHECK(sine.verdict["l1_vanishes"].get<bool>());
  CHECK(summarize_l1_xlogx(reread(sine), 1e-3)["passed"] == sine.verdict["passed"]);

  const auto spike = run_l1_xlogx(cfg_of(
      R"({"schema":1,"sequence":{"family":"spike","p":1,"background":1,"shift":1}})"));
  CHECK(spike.passed);
  CHECK(spike.verdict["hypothesis_failure"].get<bool>());
  CHECK_FALSE(spike.verdict["theorem_applies"].get<bool>());

  // Sine perturbation of amplitude 1 around 0 goes negative.
  CHECK_THROWS_AS(run_l1_xlogx(cfg_of(
                      R"({"schema":1,"sequence":{"family":"strong","u":0,"w":{"kind":"sine","amplitude":1,"frequency":2},"alpha":1}})")),
                  ValidationError);
  CHECK_THROWS_AS(run_l1_xlogx(cfg_of(
                      R"({"schema":1,"reference":0,"sequence":{"family":"spike","p":1}})")),
                  ValidationError);
  CHECK_THROWS_AS(run_l1_xlogx(cfg_of(
                      R"({"schema":1,"entropy":{"family":"quadratic"},"sequence":{"family":"spike","p":1}})")),
                  ConfigError);
}

TEST_CASE("ckp_sweep small run") {
  const auto r = run_ckp_sweep(cfg_of(R"({"schema":1,"trials":50,"seed":3})", "ckp_sweep"));
  CHECK(r.passed);
  CHECK(r.table.size() == 100);
  CHECK(r.verdict["ckp"]["violations"] == 0);
  CHECK(r.verdict["generalized_ckp"]["violations"] == 0);
  // The identity pair sits on the boundary of both inequalities.
  CHECK(r.verdict["ckp"]["zero_slack_rows"].get<std::size_t>() >= 1);
  CHECK(std::fabs(r.verdict["params"]["A"]["value"].get<double>() - 1.0) <= 1e-12);

  auto again = summarize_ckp_sweep(reread(r));
  auto original = r.verdict;
  original.erase("params");
  again.erase("params");
  CHECK(again == original);
  CHECK(csv_of(r) == csv_of(run_ckp_sweep(cfg_of(R"({"schema":1,"trials":50,"seed":3})", "ckp_sweep"))));
  CHECK(csv_of(r) != csv_of(run_ckp_sweep(cfg_of(R"({"schema":1,"trials":50,"seed":4})", "ckp_sweep"))));
}

TEST_CASE("young_recovery") {
  const auto osc = run_young_recovery(cfg_of(
      R"({"schema":1,"grid":{"N":16384},"n":256,"sequence":{"family":"oscillation","a":0,"b":1,"theta":0.5}})"));
  CHECK(osc.passed);
  CHECK(osc.table.size() == 16);
  for (double e : osc.table.numeric_column("atom_error")) CHECK(e <= 0.02);
  CHECK(std::fabs(osc.verdict["concentration_total"].get<double>()) <= 0.05);
  REQUIRE(osc.artifacts.size() == 1);
  CHECK(osc.artifacts[0].first == "young_recovery.json");

  const auto sp = run_young_recovery(cfg_of(
      R"({"schema":1,"grid":{"N":10000},"n":100,"estimator":{"window":0.0625},"sequence":{"family":"spike","p":2}})"));
  CHECK(sp.passed);
  CHECK(std::fabs(sp.verdict["concentration_total"].get<double>() - 1.0) <= 0.05);
  CHECK(sp.verdict["peak_window"] == 8);
  CHECK(sp.verdict["localized"].get<bool>());
  auto again = summarize_young_recovery(reread(sp), 0.02, 0.05);
  auto original = sp.verdict;
  for (auto* v : {&again, &original}) {
    v->erase("params");
    v->erase("estimator_failure");
  }
  CHECK(again == original);
}

TEST_CASE("run_experiment dispatch and report files") {
  CHECK_THROWS_AS(run_experiment("nope", cfg_of(R"({"schema":1})")), ConfigError);
  CHECK(experiment_catalog().size() == 4);
  const auto r = run_experiment("equivalence_p", cfg_of(kStrong));
  const auto dir = std::filesystem::temp_directory_path() / "relent_report_test";
  std::filesystem::remove_all(dir);
  write_report(r, dir);
  std::ifstream csv(dir / "equivalence_p.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "n,rel_entropy,lp_distance,measure_deviation,tail_p,concentration_total");
  std::ifstream vin(dir / "verdict.json");
  CHECK(json::parse(vin)["passed"] == true);
  std::filesystem::remove_all(dir);
}
