#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <sys/wait.h>

#include "support.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    auto p = fs::temp_directory_path() / ("uam_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + UAM_SIM_EXE + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string write(const std::string& name, const std::string& text) {
  const auto p = workdir() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string q(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

TEST_CASE("validate accepts the bundled scenarios") {
  for (const char* s : {"minimal", "hamburg-like", "suburban"})
    CHECK(run("validate " + q(testing::data_path(std::string("scenarios/") + s + ".json"))) == 0);
}

TEST_CASE("exit codes") {
  auto j = testing::read_json("scenarios/minimal.json");
  j.erase("seed");
  CHECK(run("validate " + q(write("noseed.json", j.dump()))) == 2);
  CHECK(run("validate " + q(write("broken.json", "{\n  \"seed\": 1,\n  oops\n}"))) == 2);

  auto bad = testing::read_json("scenarios/minimal.json");
  bad["fleet"]["specs"][0]["energy"]["e_km_base"] = 0.02;
  CHECK(run("validate " + q(write("infeasible.json", bad.dump()))) == 3);

  CHECK(run("calibrate aging " + q(write("targets.json", R"({"targets": []})")) + " --specs " +
            q(testing::data_path("specs"))) == 4);
  CHECK(run("validate " + q((workdir() / "does_not_exist.json").string())) == 1);
  CHECK(run("frobnicate") == 2);
}

TEST_CASE("run with a zero horizon") {
  const auto out = workdir() / "zero";
  CHECK(run("run " + q(testing::data_path("scenarios/hamburg-like.json")) + " --horizon 0 --out " +
            q(out.string())) == 0);
  CHECK(fs::exists(out / "metrics.json"));
  CHECK(fs::exists(out / "flights.csv"));
}

TEST_CASE("rerunning the resolved config reproduces every table") {
  const auto a = workdir() / "a";
  const auto b = workdir() / "b";
  REQUIRE(run("run " + q(testing::data_path("scenarios/hamburg-like.json")) + " --horizon 21600 --out " +
              q(a.string())) == 0);
  REQUIRE(run("run " + q((a / "resolved_config.json").string()) + " --out " + q(b.string())) == 0);
  for (const char* f : {"events.csv", "events.jsonl", "flights.csv", "requests.csv", "battery.csv",
                        "vertidromes.csv", "costs.csv"})
    CHECK_MESSAGE(slurp(a / f) == slurp(b / f), f);
}

TEST_CASE("several seeds land in separate directories") {
  const auto out = workdir() / "seeds";
  REQUIRE(run("run " + q(testing::data_path("scenarios/hamburg-like.json")) +
              " --horizon 7200 --seeds 3,4 --jobs 2 --out " + q(out.string())) == 0);
  CHECK(fs::exists(out / "seed-3" / "metrics.json"));
  CHECK(fs::exists(out / "seed-4" / "metrics.json"));
  CHECK(slurp(out / "seed-3" / "requests.csv") != slurp(out / "seed-4" / "requests.csv"));
}

TEST_CASE("calibrate and scan") {
  CHECK(run("calibrate energy " + q(testing::data_path("calibration/energy_range_fade_anchors.json"))) == 0);
  CHECK(run("calibrate econ " + q(testing::data_path("costs/default.json")) + " --aging " +
            q(testing::data_path("calibration/aging_params.json"))) == 0);
  const auto out = workdir() / "scan";
  CHECK(run("scan " + q(testing::data_path("cities/synthetic25.json")) + " --out " + q(out.string())) == 0);
  CHECK(fs::exists(out / "demand_grid.csv"));
}
