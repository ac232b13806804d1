#include <doctest.h>

#include <map>
#include <set>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "support.hpp"
#include "uam/energy/energy_model.hpp"
#include "uam/report/tables.hpp"
#include "uam/sim/simulation.hpp"

using namespace uam;
using sim::Field;
using sim::RecordKind;

namespace {

std::vector<const sim::Record*> of_kind(const sim::EventLog& log, RecordKind k) {
  std::vector<const sim::Record*> out;
  for (const auto& r : log.records())
    if (r.kind == k) out.push_back(&r);
  return out;
}

std::size_t count_reason(const sim::EventLog& log, const std::string& reason) {
  std::size_t n = 0;
  for (const auto* r : of_kind(log, RecordKind::RequestOutcome))
    if (r->has(Field::reason) && r->text(Field::reason) == reason) ++n;
  return n;
}

nlohmann::json vehicle(const std::string& id, const std::string& home) {
  return {{"id", id}, {"spec", "multirotor_near"}, {"home", home}};
}

}  // namespace

TEST_CASE("uncontended request departs at the window start") {
  auto j = testing::two_node_json();
  testing::force_choice(j, true);
  j["demand"]["requests"].push_back(testing::request(0, "A", "B"));
  const auto log = sim::run_scenario(testing::scenario(j));
  const auto sched = of_kind(log, RecordKind::FlightScheduled);
  REQUIRE(sched.size() == 1);
  CHECK(sched[0]->integer(Field::t_dep) == 600);
  CHECK(sched[0]->integer(Field::t_arr) == 600 + 660);
  const auto dep = of_kind(log, RecordKind::FlightDeparture);
  const auto arr = of_kind(log, RecordKind::FlightArrival);
  REQUIRE(dep.size() == 1);
  REQUIRE(arr.size() == 1);
  CHECK(dep[0]->t == 600);
  CHECK(arr[0]->t == 1260);
  CHECK(arr[0]->number(Field::soc_after) > 0.0);
}

TEST_CASE("late vehicle availability pushes departure to boarding end") {
  auto j = testing::two_node_json();
  testing::force_choice(j, true);
  j["demand"]["requests"].push_back(testing::request(0, "A", "B"));
  j["demand"]["requests"].push_back(testing::request(1300, "B", "A"));
  const auto log = sim::run_scenario(testing::scenario(j));
  const auto sched = of_kind(log, RecordKind::FlightScheduled);
  REQUIRE(sched.size() == 2);
  // Arrived at 1260, recharged, then boarding.
  const auto charge = of_kind(log, RecordKind::ChargeComplete);
  REQUIRE(!charge.empty());
  CHECK(sched[1]->integer(Field::t_dep) == std::max<std::int64_t>(1300 + 600, charge[0]->t + 300));
}

TEST_CASE("a second request on the same pair pools into the committed flight") {
  auto j = testing::two_node_json();
  testing::force_choice(j, true);
  j["demand"]["requests"].push_back(testing::request(0, "A", "B", 1));
  j["demand"]["requests"].push_back(testing::request(0, "A", "B", 2));
  const auto log = sim::run_scenario(testing::scenario(j));
  const auto pools = of_kind(log, RecordKind::PoolCheck);
  REQUIRE(pools.size() == 2);
  CHECK(pools[0]->text(Field::outcome) == "miss");
  CHECK(pools[1]->text(Field::outcome) == "hit");
  CHECK(of_kind(log, RecordKind::FlightScheduled).size() == 1);
  const auto dep = of_kind(log, RecordKind::FlightDeparture);
  REQUIRE(dep.size() == 1);
  CHECK(dep[0]->integer(Field::passengers) == 3);
  const auto outcomes = of_kind(log, RecordKind::RequestOutcome);
  CHECK(outcomes[1]->text(Field::outcome) == "pooled");
}

TEST_CASE("pooling disabled always schedules") {
  auto j = testing::two_node_json();
  testing::force_choice(j, true);
  j["ops"]["pooling"] = false;
  j["fleet"]["vehicles"].push_back(vehicle("V2", "A"));
  j["demand"]["requests"].push_back(testing::request(0, "A", "B", 1));
  j["demand"]["requests"].push_back(testing::request(60, "A", "B", 1));
  const auto log = sim::run_scenario(testing::scenario(j));
  for (const auto* p : of_kind(log, RecordKind::PoolCheck)) CHECK(p->text(Field::outcome) == "disabled");
  CHECK(of_kind(log, RecordKind::FlightScheduled).size() == 2);
}

TEST_CASE("a pool that would overrun the energy budget opens a new flight") {
  const auto s = testing::spec("multirotor_near");
  const double r4 = energy::payload_range(s, 1.0, 4);
  const double r3 = energy::payload_range(s, 1.0, 3);
  REQUIRE(r3 > r4);
  const double km = 0.5 * (r3 + r4);
  auto j = testing::two_node_json(km);
  testing::force_choice(j, true);
  j["fleet"]["vehicles"].push_back(vehicle("V2", "A"));
  // pilot + 1, then pilot + 1 + 2 would be 4 on board
  j["demand"]["requests"].push_back(testing::request(0, "A", "B", 1));
  j["demand"]["requests"].push_back(testing::request(0, "A", "B", 2));
  const auto log = sim::run_scenario(testing::scenario(j));
  const auto pools = of_kind(log, RecordKind::PoolCheck);
  REQUIRE(pools.size() == 2);
  CHECK(pools[1]->text(Field::outcome) == "miss");
  const auto sched = of_kind(log, RecordKind::FlightScheduled);
  REQUIRE(sched.size() == 2);
  CHECK(sched[0]->text(Field::vehicle) != sched[1]->text(Field::vehicle));
  CHECK(count_reason(log, "no_energy") == 0);
}

TEST_CASE("vehicles without the energy for the leg give no_energy") {
  auto j = testing::two_node_json();
  j["fleet"]["vehicles"].push_back(vehicle("V2", "A"));
  sim::Simulation simu(testing::scenario(j));
  auto& d = simu.dispatcher();
  CHECK(d.select_vehicle(0, 1, 2, 3600).vehicle.value() == 0);
  d.vehicle_mut(0).battery.capacity_fraction = 0.1;
  CHECK(d.select_vehicle(0, 1, 2, 3600).vehicle.value() == 1);
  d.vehicle_mut(1).battery.capacity_fraction = 0.1;
  const auto sel = d.select_vehicle(0, 1, 2, 3600);
  CHECK(!sel.vehicle);
  CHECK(sel.reason == fleet::RejectReason::no_energy);
  const auto none = d.select_vehicle(1, 0, 2, 3600);
  CHECK(!none.vehicle);
  CHECK(none.reason == fleet::RejectReason::no_vehicle);
}

TEST_CASE("payload above the seat count is never assigned") {
  auto j = testing::two_node_json();
  sim::Simulation simu(testing::scenario(j));
  const auto sel = simu.dispatcher().select_vehicle(0, 1, 5, 3600);
  CHECK(!sel.vehicle);
}

TEST_CASE("a declined offer frees its slots for the next booking") {
  auto j = testing::two_node_json();
  testing::force_choice(j, false);
  j["demand"]["requests"].push_back(testing::request(0, "A", "B"));
  sim::Simulation simu(testing::scenario(j));
  simu.run_until(100);
  const auto& log = simu.log();
  const auto sched = of_kind(log, RecordKind::FlightScheduled);
  REQUIRE(sched.size() == 1);
  CHECK(of_kind(log, RecordKind::FlightCancelled).size() == 1);
  CHECK(of_kind(log, RecordKind::SlotReleased).size() == 2);
  auto& d = simu.dispatcher();
  CHECK(d.flights().begin()->second.status == fleet::FlightStatus::cancelled);
  CHECK(!d.vehicles()[0].pending_flight);
  CHECK(d.slot_table(0).booked() == 0);
  CHECK(d.slot_table(1).booked() == 0);
  const auto again = d.schedule_flight(0, 0, 1, 600, 2400, 100, std::nullopt);
  REQUIRE(again.flight);
  CHECK(d.flights().at(*again.flight).dep_slot.t_start == sched[0]->integer(Field::t_dep));
}

TEST_CASE("repositioning answers one-sided demand") {
  auto make = [](bool reposition) {
    auto j = testing::two_node_json();
    testing::force_choice(j, true);
    j["ops"]["pooling"] = false;
    j["ops"]["reposition"]["enabled"] = reposition;
    j["ops"]["reposition"]["threshold"] = 2;
    for (auto& v : j["network"]["vertidromes"]) v["n_stands"] = 8;
    j["fleet"]["vehicles"] = nlohmann::json::array();
    for (int i = 0; i < 4; ++i) j["fleet"]["vehicles"].push_back(vehicle("V" + std::to_string(i), "A"));
    for (int k = 0; k < 48; ++k) j["demand"]["requests"].push_back(testing::request(600 * k, "A", "B"));
    return sim::run_scenario(testing::scenario(j));
  };
  const auto without = make(false);
  const auto with = make(true);
  const auto ferries = of_kind(with, RecordKind::RepositionDispatched);
  CHECK(!ferries.empty());
  for (const auto* f : ferries) {
    CHECK(f->text(Field::origin) == "B");
    CHECK(f->text(Field::destination) == "A");
  }
  CHECK(of_kind(without, RecordKind::RepositionDispatched).empty());
  CHECK(count_reason(with, "no_vehicle") < count_reason(without, "no_vehicle"));
  CHECK(report::scan_run(testing::scenario(testing::two_node_json()), with).corridor_separation == 0);
}

TEST_CASE("seats are conserved and the bundled city run scans clean") {
  const auto s = testing::scenario(testing::read_json("scenarios/hamburg-like.json"));
  const auto log = sim::run_scenario(s);
  std::int64_t sold = 0;
  for (const auto* r : of_kind(log, RecordKind::RequestOutcome)) {
    const auto& o = r->text(Field::outcome);
    if (o == "accepted" || o == "pooled") sold += r->integer(Field::passengers);
  }
  std::int64_t flown = 0;
  for (const auto* r : of_kind(log, RecordKind::FlightDeparture)) {
    flown += r->integer(Field::passengers);
    CHECK(r->integer(Field::passengers) <= r->integer(Field::seats_capacity));
  }
  CHECK(sold == flown);
  const auto scan = report::scan_run(s, log);
  CHECK_MESSAGE(scan.clean(), fmt::format("{}", fmt::join(scan.findings(), "; ")));
}

TEST_CASE("battery replacement changes the fare basis") {
  auto j = testing::two_node_json();
  testing::force_choice(j, true);
  j["aging"]["alpha_cal"] = 0.02;
  j["aging"]["replace_threshold"] = 0.95;
  j["aging"]["knee_fraction"] = 0.9;
  j["horizon_s"] = 8 * 86400;
  for (int k = 0; k < 8 * 12; ++k)
    j["demand"]["requests"].push_back(testing::request(7200 * k, k % 2 ? "B" : "A", k % 2 ? "A" : "B"));
  const auto log = sim::run_scenario(testing::scenario(j));
  const auto repl = of_kind(log, RecordKind::BatteryReplaced);
  REQUIRE(!repl.empty());
  CHECK(repl[0]->number(Field::cycle_life) > 0.0);
  std::set<double> before, after;
  for (const auto* r : of_kind(log, RecordKind::FlightScheduled))
    (r->t < repl[0]->t ? before : after).insert(r->number(Field::fare_per_seat));
  REQUIRE(!before.empty());
  REQUIRE(!after.empty());
  CHECK(*after.begin() != *before.begin());
  const auto ticks = of_kind(log, RecordKind::CalendarAging);
  CHECK(ticks.size() == 8);
}
