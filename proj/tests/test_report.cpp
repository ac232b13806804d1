#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "support.hpp"
#include "uam/error.hpp"
#include "uam/report/tables.hpp"
#include "uam/sim/simulation.hpp"

using namespace uam;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("uam_report_" + name + "_" + std::to_string(std::random_device{}()));
  fs::remove_all(p);
  return p;
}

report::RunTables read_tables(const fs::path& dir) {
  return {report::read_table(dir / "flights.csv"), report::read_table(dir / "requests.csv"),
          report::read_table(dir / "battery.csv"), report::read_table(dir / "vertidromes.csv"),
          report::read_table(dir / "costs.csv")};
}

}  // namespace

TEST_CASE("csv round trip with quoting") {
  report::Table t{{"a", "b,c"}, {{"x", "say \"hi\""}, {"line\nbreak", ""}, {"1.5", "2"}}};
  std::ostringstream out;
  report::write_csv(out, t);
  CHECK(out.str().substr(0, 9) == "a,\"b,c\"\r\n");
  std::istringstream in(out.str());
  const auto back = report::read_csv(in);
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
  CHECK(back.number(2, "a") == 1.5);
  CHECK(back.number(1, "b,c") == 0.0);
  CHECK_THROWS_AS(back.column("zzz"), DomainError);
}

TEST_CASE("malformed csv") {
  std::istringstream ragged("a,b\r\n1\r\n");
  CHECK_THROWS_AS(report::read_csv(ragged), ParseError);
  std::istringstream open_quote("a\r\n\"x\r\n");
  CHECK_THROWS_AS(report::read_csv(open_quote), ParseError);
}

TEST_CASE("metrics from written csv equal metrics from a replayed log") {
  const auto s = testing::scenario(testing::read_json("scenarios/hamburg-like.json"));
  const auto log = sim::run_scenario(s, 6 * 3600);
  const auto dir = scratch("replay");
  report::write_run_artifacts(dir, s, log);
  for (const char* f : {"events.csv", "events.jsonl", "flights.csv", "requests.csv", "battery.csv",
                        "vertidromes.csv", "costs.csv", "metrics.json", "resolved_config.json"})
    CHECK_MESSAGE(fs::exists(dir / f), f);

  std::ifstream in(dir / "events.jsonl");
  const auto replay = sim::EventLog::read_ndjson(in);
  REQUIRE(replay.size() == log.size());
  const auto from_csv = report::metrics_from_tables(read_tables(dir));
  const auto from_log = report::metrics_from_tables(report::build_tables(s, replay));
  CHECK(from_csv.dump() == from_log.dump());

  std::ifstream mj(dir / "metrics.json");
  const auto written = nlohmann::ordered_json::parse(mj);
  CHECK(written.dump() == from_csv.dump());
  CHECK(from_csv["flights_flown"].get<int>() > 0);
  CHECK(from_csv["horizon_days"].get<double>() == doctest::Approx(0.25));

  std::ifstream rc(dir / "resolved_config.json");
  CHECK(sim::serialize(sim::scenario_from_json(nlohmann::json::parse(rc))) == sim::serialize(s));
  fs::remove_all(dir);
}

TEST_CASE("tables agree with the log") {
  const auto s = testing::scenario(testing::read_json("scenarios/hamburg-like.json"));
  const auto log = sim::run_scenario(s, 4 * 3600);
  const auto t = report::build_tables(s, log);
  std::size_t requests = 0;
  for (const auto& r : log.records())
    if (r.kind == sim::RecordKind::RequestArrival) ++requests;
  CHECK(t.requests.rows.size() == requests);
  CHECK(t.vertidromes.rows.size() == s.network.size());
  std::size_t end_rows = 0;
  for (std::size_t i = 0; i < t.battery.rows.size(); ++i)
    if (t.battery.cell(i, "event") == "end") ++end_rows;
  CHECK(end_rows == s.fleet.vehicles.size());
  for (std::size_t i = 0; i < t.costs.rows.size(); ++i) {
    double parts = 0.0;
    for (const char* c : {"energy", "battery", "maintenance", "crew", "capital", "insurance", "fees", "indirect"})
      parts += t.costs.number(i, c);
    CHECK(parts == doctest::Approx(t.costs.number(i, "total")));
  }
}

TEST_CASE("a zero horizon still writes valid artifacts") {
  auto s = testing::scenario(testing::read_json("scenarios/hamburg-like.json"));
  const auto log = sim::run_scenario(s, 0);
  const auto dir = scratch("zero");
  report::write_run_artifacts(dir, s, log, nlohmann::json{{"note", "empty"}});
  const auto t = read_tables(dir);
  CHECK(t.flights.rows.empty());
  CHECK(!t.flights.header.empty());
  const auto m = report::metrics_from_tables(t);
  CHECK(m["flights_flown"].get<int>() == 0);
  CHECK(m["vehicles"].get<int>() == 20);
  std::ifstream mj(dir / "metrics.json");
  CHECK(nlohmann::json::parse(mj)["metadata"]["note"] == "empty");
  CHECK(report::scan_run(s, log).clean());
  fs::remove_all(dir);
}

TEST_CASE("demand grid table") {
  demand::ScanResult r;
  r.grid = {{2.0, 6.0}, {1.0, 4.0}};
  r.cells = {{"x", 0, 1, 1234.5, true}, {"x", 1, 0, 10.0, false}};
  const auto t = report::demand_grid_table(r);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.number(0, "price_level") == 2.0);
  CHECK(t.number(0, "density_level") == 4.0);
  CHECK(t.cell(0, "qualifies") == "1");
  CHECK(t.number(1, "daily_uam_trips") == 10.0);
}
