#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "relent/harness.hpp"

using namespace relent;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

class Scratch {
 public:
  explicit Scratch(const std::string& name) : dir_(fs::temp_directory_path() / name) {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }
  std::string write(const std::string& file, const std::string& text) const {
    std::ofstream(dir_ / file) << text;
    return (dir_ / file).string();
  }
  std::string path(const std::string& p) const { return (dir_ / p).string(); }

 private:
  fs::path dir_;
};

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("list and usage") {
  const auto l = run({"--list"});
  CHECK(l.code == 0);
  CHECK(l.out.find("equivalence_p") != std::string::npos);
  CHECK(l.out.find("young_recovery") != std::string::npos);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"experiment", "equivalence_p"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("experiment writes its report") {
  Scratch s("relent_cli_exp");
  const auto cfg = s.write("c.json",
                           R"({"schema":1,"entropy":{"family":"quadratic"},)"
                           R"("sequence":{"family":"strong","u":{"kind":"x"},"w":1,"alpha":1}})");
  const auto r = run({"experiment", "equivalence_p", "--config", cfg, "--out", s.path("out")});
  CHECK(r.code == kExitOk);
  CHECK(fs::exists(s.path("out/equivalence_p.csv")));
  const auto v = read_json(s.path("out/verdict.json"));
  CHECK(v["status"] == "completed");
  CHECK(v["passed"] == true);

  const auto bad = run({"experiment", "nope", "--config", cfg, "--out", s.path("x")});
  CHECK(bad.code == kExitUsage);
  CHECK(bad.err.find("experiment") != std::string::npos);
}

TEST_CASE("hypothesis failures exit 1 with a verdict") {
  Scratch s("relent_cli_hyp");
  const auto cfg = s.write(
      "c.json",
      R"({"schema":1,"sequence":{"family":"strong","u":0,"w":{"kind":"sine","amplitude":1,"frequency":2},"alpha":1}})");
  const auto r = run({"experiment", "l1_xlogx", "--config", cfg, "--out", s.path("out")});
  CHECK(r.code == kExitValidation);
  const auto v = read_json(s.path("out/verdict.json"));
  CHECK(v["status"] == "hypothesis_failure");
  CHECK(v["passed"] == false);
  CHECK(v["message"].get<std::string>().find("negative") != std::string::npos);
}

TEST_CASE("configuration errors exit 2 naming the key") {
  Scratch s("relent_cli_cfg");
  const auto bad_key = s.write("a.json", R"({"schema":1,"grid":{"N":-4}})");
  const auto r = run({"experiment", "equivalence_p", "--config", bad_key, "--out", s.path("o")});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("grid.N") != std::string::npos);

  const auto malformed = s.write("b.json", "{\"schema\": 1,");
  CHECK(run({"generate", "--config", malformed, "--out", s.path("o")}).code == kExitUsage);
  CHECK(run({"generate", "--config", s.path("missing.json"), "--out", s.path("o")}).code ==
        kExitUsage);
}

TEST_CASE("generate, evaluate, young and diagnose") {
  Scratch s("relent_cli_sub");
  const auto spike = s.write("spike.json",
                             R"({"schema":1,"grid":{"N":1024},"schedule":[4,16,64],)"
                             R"("entropy":{"family":"quadratic"},"sequence":{"family":"spike","p":2}})");
  CHECK(run({"generate", "--config", spike, "--out", s.path("g")}).code == kExitOk);
  CHECK(fs::exists(s.path("g/u_n64.csv")));
  CHECK(fs::exists(s.path("g/weak_limit.csv")));
  CHECK(read_json(s.path("g/manifest.json")).contains("terms"));

  const auto ev = s.write("ev.json",
                          R"({"schema":1,"grid":{"N":2},"entropy":{"family":"normalized_xlogx"},)"
                          R"("v":{"kind":"csv","path":")" + s.path("v.csv") + R"("},"u":1})");
  s.write("v.csv", "x_mid,v0\n0.25,2\n0.75,0\n");
  const auto e = run({"evaluate", "--config", ev, "--out", s.path("e")});
  CHECK(e.code == kExitOk);
  const auto ej = read_json(s.path("e/evaluate.json"));
  CHECK(ej["rel_entropy"].get<double>() == doctest::Approx(std::log(2.0)));
  CHECK(fs::exists(s.path("e/checks.csv")));

  const auto osc = s.write("osc.json",
                           R"({"schema":1,"grid":{"N":4096},"n":64,"schedule":[16,64],)"
                           R"("sequence":{"family":"oscillation","a":0,"b":1,"theta":0.5}})");
  CHECK(run({"young", "--config", osc, "--out", s.path("y")}).code == kExitOk);
  CHECK(fs::exists(s.path("y/young.json")));
  CHECK(fs::exists(s.path("y/weak_limit.csv")));

  CHECK(run({"diagnose", "--config", spike, "--out", s.path("d")}).code == kExitOk);
  const auto dj = read_json(s.path("d/diagnose.json"));
  CHECK(dj["vitali"]["consistent"] == true);
  CHECK(dj.contains("dlvp"));
  CHECK(fs::exists(s.path("d/tail_profile.csv")));
}
