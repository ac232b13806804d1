#include <doctest.h>

#include <algorithm>
#include <sstream>
#include <tuple>

#include <boost/random/uniform_int_distribution.hpp>

#include "support.hpp"
#include "uam/error.hpp"
#include "uam/random.hpp"
#include "uam/sim/event_log.hpp"
#include "uam/sim/event_queue.hpp"
#include "uam/sim/scenario.hpp"
#include "uam/sim/simulation.hpp"

using namespace uam;
using namespace uam::sim;

TEST_CASE("same-tick events pop in kind rank order") {
  EventQueue q;
  q.schedule(100, EventKind::RequestArrival, 1);
  q.schedule(100, EventKind::FlightArrival, 2);
  q.schedule(100, EventKind::FlightDeparture, 3);
  q.schedule(100, EventKind::ChargeComplete, 4);
  q.schedule(100, EventKind::StandReleased, 5);
  std::vector<EventKind> order;
  while (auto e = q.pop()) order.push_back(e->kind);
  CHECK(order == std::vector<EventKind>{EventKind::FlightArrival, EventKind::ChargeComplete, EventKind::StandReleased,
                                        EventKind::FlightDeparture, EventKind::RequestArrival});
}

TEST_CASE("event at the clock is accepted, earlier is rejected") {
  EventQueue q;
  q.schedule(50, EventKind::RequestArrival);
  REQUIRE(q.pop()->t == 50);
  CHECK(q.clock() == 50);
  CHECK_NOTHROW(q.schedule(50, EventKind::FlightArrival));
  CHECK(q.peek()->t == 50);
  CHECK_THROWS_AS(q.schedule(49, EventKind::FlightArrival), DomainError);
  CHECK_THROWS_AS(q.advance(10), DomainError);
}

TEST_CASE("10k random events pop in (t, rank, id) order, identically across runs") {
  auto run = [](std::uint64_t seed) {
    RandomStreams streams(seed);
    auto rng = streams.stream("queue-test");
    boost::random::uniform_int_distribution<SimTime> t(0, 500);
    boost::random::uniform_int_distribution<int> k(0, 7);
    EventQueue q;
    std::vector<Event> pushed;
    for (int i = 0; i < 10000; ++i) {
      const auto kind = static_cast<EventKind>(k(rng));
      const SimTime at = t(rng);
      const auto id = q.schedule(at, kind);
      pushed.push_back(Event{id, at, kind, 0});
    }
    std::vector<Event> popped;
    while (auto e = q.pop()) popped.push_back(*e);
    return std::make_pair(pushed, popped);
  };
  auto [pushed, popped] = run(7);
  auto oracle = pushed;
  std::sort(oracle.begin(), oracle.end(), [](const Event& a, const Event& b) {
    return std::make_tuple(a.t, rank(a.kind), a.id) < std::make_tuple(b.t, rank(b.kind), b.id);
  });
  REQUIRE(popped.size() == oracle.size());
  for (std::size_t i = 0; i < oracle.size(); ++i) CHECK(popped[i].id == oracle[i].id);
  auto again = run(7).second;
  for (std::size_t i = 0; i < popped.size(); ++i) CHECK(again[i].id == popped[i].id);
}

TEST_CASE("unknown event kinds are rejected") {
  CHECK(event_kind_from_string("FlightArrival") == EventKind::FlightArrival);
  CHECK_THROWS_AS(event_kind_from_string("Teleport"), ConfigError);
}

TEST_CASE("random streams are independent of consumer order") {
  RandomStreams s(42);
  auto a1 = s.stream("demand", 0);
  auto b = s.stream("mode_choice", 3);
  (void)b();
  auto a2 = s.stream("demand", 0);
  CHECK(a1() == a2());
  CHECK(s.stream("demand", 1)() != s.stream("demand", 0)());
  CHECK(RandomStreams(43).stream("demand", 0)() != RandomStreams(42).stream("demand", 0)());
}

TEST_CASE("event log ndjson round trip and csv quoting") {
  EventLog log;
  auto& r = log.append(10, RecordKind::Anomaly);
  put(r, Field::message, std::string("a, \"quoted\"\nline"));
  put(r, Field::soc_after, 0.1 + 0.2);
  put(r, Field::flight, std::int64_t{7});
  std::stringstream nd;
  log.write_ndjson(nd);
  const auto back = EventLog::read_ndjson(nd);
  REQUIRE(back.size() == 1);
  CHECK(back.records()[0].text(Field::message) == "a, \"quoted\"\nline");
  CHECK(back.records()[0].number(Field::soc_after) == 0.1 + 0.2);
  CHECK(back.records()[0].integer(Field::flight) == 7);
  std::stringstream csv;
  log.write_csv(csv);
  CHECK(csv.str().find("\"a, \"\"quoted\"\"\nline\"") != std::string::npos);
  CHECK(csv.str().find("\r\n") != std::string::npos);
}

TEST_CASE("minimal scenario fills defaults") {
  const auto s = load_scenario_file(testing::data_path("scenarios/minimal.json"));
  CHECK(s.network.size() == 1);
  CHECK(s.fleet.vehicles.size() == 1);
  CHECK(s.demand.requests.empty());
  auto j = testing::read_json("scenarios/minimal.json");
  j["network"]["vertidromes"][0].erase("n_stands");
  j["network"]["vertidromes"][0]["n_fato"] = 3;
  CHECK(scenario_from_json(j).network.at(0).n_stands == 6);
}

TEST_CASE("dangling spec reference names the id") {
  auto j = testing::read_json("scenarios/minimal.json");
  j["fleet"]["vehicles"][0]["spec"] = "X9";
  try {
    scenario_from_json(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("unknown spec X9") != std::string::npos);
  }
}

TEST_CASE("missing seed and syntax errors") {
  auto j = testing::read_json("scenarios/minimal.json");
  j.erase("seed");
  try {
    scenario_from_json(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("seed") != std::string::npos);
  }
  try {
    load_scenario("{\n  \"seed\": 1,\n  oops\n}");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("bundled scenarios re-serialize byte-identically") {
  for (const char* name : {"hamburg-like", "suburban", "minimal"}) {
    const auto text = read_text_file(testing::data_path(std::string("scenarios/") + name + ".json"));
    // normalize(x): the canonical dump of the raw document
    const auto normalized = nlohmann::json::parse(text).dump(2) + "\n";
    CHECK(serialize(load_scenario(text)) == normalized);
    CHECK(normalized == text);
  }
}

TEST_CASE("zero-request run logs only calendar ticks") {
  auto s = load_scenario_file(testing::data_path("scenarios/minimal.json"));
  s.horizon_s = 3 * kDay;
  Simulation sim(s);
  sim.run_until(s.horizon_s);
  REQUIRE(sim.log().size() == 3);
  for (const auto& r : sim.log().records()) CHECK(r.kind == RecordKind::CalendarAging);
  CHECK(sim.clock() == 3 * kDay);
  CHECK_THROWS_AS(sim.run_until(4 * kDay), DomainError);
}

TEST_CASE("one feasible request walks the whole pipeline in order") {
  auto j = testing::two_node_json();
  j["demand"]["requests"].push_back(testing::request(3600, "A", "B"));
  testing::force_choice(j, true);
  Simulation sim(testing::scenario(j));
  sim.run_until(kDay);
  std::vector<RecordKind> queued;
  for (const auto& r : sim.log().records())
    if (r.kind == RecordKind::RequestArrival || r.kind == RecordKind::FlightDeparture ||
        r.kind == RecordKind::FlightArrival || r.kind == RecordKind::ChargeComplete)
      queued.push_back(r.kind);
  CHECK(queued == std::vector<RecordKind>{RecordKind::RequestArrival, RecordKind::FlightDeparture,
                                          RecordKind::FlightArrival, RecordKind::ChargeComplete});
  // causality: non-decreasing log time
  SimTime last = 0;
  for (const auto& r : sim.log().records()) {
    CHECK(r.t >= last);
    last = r.t;
  }
}

TEST_CASE("same seed, same log") {
  auto s = load_scenario_file(testing::data_path("scenarios/hamburg-like.json"));
  s.horizon_s = 6 * kHour;
  std::stringstream a, b;
  run_scenario(s).write_ndjson(a);
  run_scenario(s).write_ndjson(b);
  CHECK(a.str() == b.str());
  s.seed += 1;
  std::stringstream c;
  run_scenario(s).write_ndjson(c);
  CHECK(c.str() != a.str());
}

TEST_CASE("every request has exactly one terminal outcome") {
  auto s = load_scenario_file(testing::data_path("scenarios/hamburg-like.json"));
  const auto log = run_scenario(s);
  std::map<std::int64_t, int> arrivals, outcomes;
  for (const auto& r : log.records()) {
    if (r.kind == RecordKind::RequestArrival) ++arrivals[r.integer(Field::request)];
    if (r.kind == RecordKind::RequestOutcome) ++outcomes[r.integer(Field::request)];
  }
  CHECK(arrivals.size() > 2000);
  CHECK(arrivals.size() == outcomes.size());
  for (const auto& [id, n] : arrivals) {
    CHECK(n == 1);
    CHECK(outcomes[id] == 1);
  }
}
