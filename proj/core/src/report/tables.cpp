#include "uam/report/tables.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "uam/vertidrome/los.hpp"

namespace uam::report {

using sim::Field;
using sim::Record;
using sim::RecordKind;

namespace {

std::string text_of(const Record& r, Field f) {
  const auto* v = r.find(f);
  return v ? sim::format_value(*v) : std::string();
}

struct FlightRow {
  std::string vehicle, origin, destination;
  std::string t_dep_sched, t_arr_sched, t_dep, t_arr;
  std::string distance_km, seats_fixed, seats_capacity, energy_used, fare_per_seat, revenue, block_hours;
  std::string reposition = "0";
  std::string status = "provisional";
};

struct RequestRow {
  std::string t, origin, destination, passengers, trip_km;
  std::string outcome, reason, mode, flight, fare_per_seat, p_uam;
};

struct SlotRef {
  std::string vertidrome;
  std::int64_t fato = 0;
  std::int64_t start = 0;
  double delay = 0.0;
};

}  // namespace

RunTables build_tables(const sim::Scenario& scenario, const sim::EventLog& log) {
  RunTables t;
  std::map<std::int64_t, FlightRow> flights;
  std::map<std::int64_t, RequestRow> requests;
  std::map<std::int64_t, std::vector<SlotRef>> slots;
  std::set<std::int64_t> departed;
  std::map<std::string, std::int64_t> peak;
  std::map<std::string, std::size_t> congestion;

  t.battery.header = {"vehicle", "event", "day", "flights", "throughput_fec", "capacity_fraction", "limiting_factor"};
  t.costs.header = {"flight",        "use_case",       "distance_km", "energy",    "battery",
                    "maintenance",   "crew",           "capital",     "insurance", "fees",
                    "indirect",      "total",          "revenue",     "fare_per_km"};
  const double knee = scenario.aging.knee_fraction;

  for (const auto& r : log.records()) {
    switch (r.kind) {
      case RecordKind::FlightScheduled: {
        auto& f = flights[r.integer(Field::flight)];
        f.vehicle = text_of(r, Field::vehicle);
        f.origin = text_of(r, Field::origin);
        f.destination = text_of(r, Field::destination);
        f.t_dep_sched = text_of(r, Field::t_dep);
        f.t_arr_sched = text_of(r, Field::t_arr);
        f.distance_km = text_of(r, Field::distance_km);
        f.seats_capacity = text_of(r, Field::seats_capacity);
        f.fare_per_seat = text_of(r, Field::fare_per_seat);
        break;
      }
      case RecordKind::FlightCommitted: {
        auto& f = flights[r.integer(Field::flight)];
        f.status = "committed";
        f.reposition = text_of(r, Field::reposition);
        break;
      }
      case RecordKind::FlightCancelled:
        flights[r.integer(Field::flight)].status = "cancelled";
        break;
      case RecordKind::FlightDeparture: {
        const auto id = r.integer(Field::flight);
        departed.insert(id);
        auto& f = flights[id];
        f.status = "departed";
        f.t_dep = sim::format_value(r.t);
        f.seats_fixed = text_of(r, Field::passengers);
        f.energy_used = text_of(r, Field::energy_used);
        f.revenue = text_of(r, Field::revenue);
        f.block_hours = text_of(r, Field::block_hours);
        f.reposition = text_of(r, Field::reposition);
        t.costs.rows.push_back({sim::format_value(id), text_of(r, Field::use_case), text_of(r, Field::distance_km),
                                text_of(r, Field::cost_energy), text_of(r, Field::cost_battery),
                                text_of(r, Field::cost_maintenance), text_of(r, Field::cost_crew),
                                text_of(r, Field::cost_capital), text_of(r, Field::cost_insurance),
                                text_of(r, Field::cost_fees), text_of(r, Field::cost_indirect),
                                text_of(r, Field::cost_total), text_of(r, Field::revenue),
                                text_of(r, Field::fare_per_km)});
        break;
      }
      case RecordKind::FlightArrival: {
        auto& f = flights[r.integer(Field::flight)];
        f.status = "completed";
        f.t_arr = sim::format_value(r.t);
        break;
      }
      case RecordKind::SlotGranted:
        slots[r.integer(Field::flight)].push_back(
            {r.text(Field::vertidrome), r.integer(Field::fato), r.integer(Field::slot_start), r.number(Field::slot_delay_s)});
        break;
      case RecordKind::RequestArrival: {
        auto& q = requests[r.integer(Field::request)];
        q.t = sim::format_value(r.t);
        q.origin = text_of(r, Field::origin);
        q.destination = text_of(r, Field::destination);
        q.passengers = text_of(r, Field::passengers);
        q.trip_km = text_of(r, Field::trip_km);
        break;
      }
      case RecordKind::OfferMade:
        requests[r.integer(Field::request)].p_uam = text_of(r, Field::p_uam);
        break;
      case RecordKind::RequestOutcome: {
        auto& q = requests[r.integer(Field::request)];
        q.outcome = text_of(r, Field::outcome);
        q.reason = text_of(r, Field::reason);
        q.mode = text_of(r, Field::mode);
        q.flight = text_of(r, Field::flight);
        q.fare_per_seat = text_of(r, Field::fare_per_seat);
        break;
      }
      case RecordKind::CalendarAging: {
        const double cap = r.number(Field::capacity_after);
        t.battery.rows.push_back({r.text(Field::vehicle), "tick", text_of(r, Field::day), text_of(r, Field::flight_cycles),
                                  text_of(r, Field::throughput_fec), text_of(r, Field::capacity_after),
                                  cap < knee ? "knee" : "none"});
        break;
      }
      case RecordKind::BatteryReplaced:
        t.battery.rows.push_back({r.text(Field::vehicle), "replaced", text_of(r, Field::day),
                                  text_of(r, Field::flight_cycles), text_of(r, Field::throughput_fec),
                                  text_of(r, Field::capacity_before), "threshold"});
        break;
      case RecordKind::RunEnd: {
        const double cap = r.number(Field::capacity_after);
        t.battery.rows.push_back({r.text(Field::vehicle), "end", text_of(r, Field::day), text_of(r, Field::flight_cycles),
                                  text_of(r, Field::throughput_fec), text_of(r, Field::capacity_after),
                                  cap < knee ? "knee" : "none"});
        break;
      }
      case RecordKind::ApronCongestion:
        ++congestion[r.text(Field::vertidrome)];
        break;
      default: break;
    }
    if (r.has(Field::stand_occupancy) && r.has(Field::vertidrome)) {
      auto& p = peak[r.text(Field::vertidrome)];
      p = std::max(p, r.integer(Field::stand_occupancy));
    }
  }

  t.flights.header = {"flight",        "vehicle",       "origin",      "destination",    "t_dep_scheduled",
                      "t_arr_scheduled", "t_dep",       "t_arr",       "distance_km",    "seats_fixed",
                      "seats_capacity", "energy_used",  "fare_per_seat", "revenue",      "block_hours",
                      "reposition",    "status"};
  for (const auto& [id, f] : flights)
    t.flights.rows.push_back({sim::format_value(id), f.vehicle, f.origin, f.destination, f.t_dep_sched, f.t_arr_sched,
                              f.t_dep, f.t_arr, f.distance_km, f.seats_fixed, f.seats_capacity, f.energy_used,
                              f.fare_per_seat, f.revenue, f.block_hours, f.reposition, f.status});

  t.requests.header = {"request", "t",    "origin", "destination", "passengers",    "trip_km",
                       "outcome", "reason", "mode", "flight",      "fare_per_seat", "p_uam"};
  for (const auto& [id, q] : requests)
    t.requests.rows.push_back({sim::format_value(id), q.t, q.origin, q.destination, q.passengers, q.trip_km, q.outcome,
                               q.reason, q.mode, q.flight, q.fare_per_seat, q.p_uam});

  // Airside service per vertidrome over flown movements.
  const auto& net = scenario.network;
  std::vector<std::vector<double>> delays(net.size());
  for (const auto& [id, refs] : slots) {
    if (!departed.count(id)) continue;
    for (const auto& s : refs) delays[static_cast<std::size_t>(net.index_of(s.vertidrome))].push_back(s.delay);
  }
  std::map<std::string, std::int64_t> homes;
  for (const auto& v : scenario.fleet.vehicles) ++homes[v.home];
  t.vertidromes.header = {"id",        "movements",           "mean_delay_s",    "p95_delay_s",
                          "los_grade", "peak_stand_occupancy", "apron_congestion"};
  for (std::size_t i = 0; i < net.size(); ++i) {
    const auto& id = net.at(static_cast<int>(i)).id;
    const auto los = vertidrome::airside_los(static_cast<int>(i), delays[i], 0.0, static_cast<double>(scenario.horizon_s));
    const auto p = std::max(homes[id], peak.count(id) ? peak[id] : 0);
    t.vertidromes.rows.push_back({id, cell(los.movements), cell(los.mean_delay_s), cell(los.p95_delay_s),
                                  std::string(vertidrome::to_string(los.grade)), cell(p),
                                  cell(congestion.count(id) ? congestion[id] : std::size_t{0})});
  }
  return t;
}

Table demand_grid_table(const demand::ScanResult& r) {
  Table t;
  t.header = {"city", "price_level", "density_level", "daily_uam_trips", "qualifies"};
  for (const auto& c : r.cells)
    t.rows.push_back({c.city, cell(r.grid.prices_per_km[c.price_index]), cell(r.grid.densities[c.density_index]),
                      cell(c.daily_uam_trips), c.qualifies ? "1" : "0"});
  return t;
}

nlohmann::ordered_json metrics_from_tables(const RunTables& t) {
  nlohmann::ordered_json m;

  double days = 0.0;
  std::size_t vehicles = 0;
  std::map<std::string, nlohmann::ordered_json> fleet;
  std::map<std::string, int> replacements;
  for (std::size_t i = 0; i < t.battery.rows.size(); ++i) {
    const auto& ev = t.battery.cell(i, "event");
    const auto& v = t.battery.cell(i, "vehicle");
    if (ev == "replaced") ++replacements[v];
    if (ev != "end") continue;
    ++vehicles;
    days = t.battery.number(i, "day");
    const double cap = t.battery.number(i, "capacity_fraction");
    fleet[v] = {{"capacity_fraction", cap},
                {"fade", 1.0 - cap},
                {"flight_cycles", t.battery.number(i, "flights")},
                {"throughput_fec", t.battery.number(i, "throughput_fec")},
                {"limiting_factor", t.battery.cell(i, "limiting_factor")}};
  }

  std::size_t flown = 0, revenue_flights = 0, ferries = 0, cancelled = 0;
  double block = 0.0, km = 0.0, seats = 0.0, capacity = 0.0, fare_sum = 0.0, fare_km_sum = 0.0;
  double fare_km_min = 0.0, fare_km_max = 0.0, revenue = 0.0;
  for (std::size_t i = 0; i < t.flights.rows.size(); ++i) {
    const auto& st = t.flights.cell(i, "status");
    if (st == "cancelled") ++cancelled;
    if (st != "departed" && st != "completed") continue;
    ++flown;
    block += t.flights.number(i, "block_hours");
    revenue += t.flights.number(i, "revenue");
    if (t.flights.cell(i, "reposition") == "1") {
      ++ferries;
      continue;
    }
    ++revenue_flights;
    const double d = t.flights.number(i, "distance_km");
    const double fare = t.flights.number(i, "fare_per_seat");
    km += d;
    seats += t.flights.number(i, "seats_fixed");
    capacity += t.flights.number(i, "seats_capacity");
    fare_sum += fare;
    const double per_km = fare / d;
    fare_km_sum += per_km;
    fare_km_min = revenue_flights == 1 ? per_km : std::min(fare_km_min, per_km);
    fare_km_max = revenue_flights == 1 ? per_km : std::max(fare_km_max, per_km);
  }
  const double fleet_days = static_cast<double>(vehicles) * days;
  const auto per = [](double a, double b) { return b > 0.0 ? a / b : 0.0; };

  m["horizon_days"] = days;
  m["vehicles"] = vehicles;
  m["flights_flown"] = flown;
  m["revenue_flights"] = revenue_flights;
  m["reposition_flights"] = ferries;
  m["cancelled_flights"] = cancelled;
  m["mean_flight_hours_per_vehicle_day"] = per(block, fleet_days);
  m["mean_missions_per_vehicle_day"] = per(static_cast<double>(flown), fleet_days);
  m["mean_mission_km"] = per(km, static_cast<double>(revenue_flights));
  m["load_factor"] = per(seats, capacity);
  m["passengers_carried"] = seats;

  std::map<std::string, std::size_t> outcomes{{"pooled", 0}, {"accepted", 0}, {"declined", 0}, {"rejected", 0}};
  std::map<std::string, std::size_t> reasons{{"no_vehicle", 0}, {"no_energy", 0}, {"no_slot", 0}, {"window_unservable", 0}};
  std::map<std::string, std::size_t> modes;
  for (std::size_t i = 0; i < t.requests.rows.size(); ++i) {
    ++outcomes[t.requests.cell(i, "outcome")];
    if (t.requests.cell(i, "outcome") == "rejected") ++reasons[t.requests.cell(i, "reason")];
    const auto& mode = t.requests.cell(i, "mode");
    if (!mode.empty()) ++modes[mode];
  }
  m["requests"] = {{"total", t.requests.rows.size()}, {"outcomes", outcomes}, {"rejections", reasons}, {"modes", modes}};
  m["fares"] = {{"mean_per_seat", per(fare_sum, static_cast<double>(revenue_flights))},
                {"mean_per_km", per(fare_km_sum, static_cast<double>(revenue_flights))},
                {"min_per_km", fare_km_min},
                {"max_per_km", fare_km_max}};

  double cost = 0.0;
  for (std::size_t i = 0; i < t.costs.rows.size(); ++i) cost += t.costs.number(i, "total");
  m["economics"] = {{"revenue", revenue}, {"cost", cost}, {"profit", revenue - cost}, {"margin", per(revenue - cost, cost)}};

  nlohmann::ordered_json los = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < t.vertidromes.rows.size(); ++i)
    los[t.vertidromes.cell(i, "id")] = {{"grade", t.vertidromes.cell(i, "los_grade")},
                                        {"movements", t.vertidromes.number(i, "movements")},
                                        {"p95_delay_s", t.vertidromes.number(i, "p95_delay_s")},
                                        {"peak_stand_occupancy", t.vertidromes.number(i, "peak_stand_occupancy")}};
  m["los"] = los;

  nlohmann::ordered_json bat = nlohmann::ordered_json::object();
  double fade = 0.0;
  for (auto& [v, j] : fleet) {
    j["replacements"] = replacements[v];
    fade += j["fade"].get<double>();
    bat[v] = j;
  }
  m["battery"] = {{"mean_fade", per(fade, static_cast<double>(vehicles))}, {"vehicles", bat}};
  return m;
}

bool ScanReport::clean() const noexcept { return findings().empty(); }

std::vector<std::string> ScanReport::findings() const {
  std::vector<std::string> out;
  auto add = [&](std::size_t n, const char* what) {
    if (n) out.push_back(fmt::format("{} {}", n, what));
  };
  add(fato_overlaps, "FATO overlaps");
  add(fato_separation, "FATO separation violations");
  add(corridor_separation, "corridor separation violations");
  add(stand_overoccupancy, "stand over-occupancy records");
  add(negative_soc_arrivals, "negative-SoC arrivals");
  add(reserve_violations, "arrivals below reserve");
  add(cancelled_slots_flown, "cancelled flights flown");
  add(seat_overflows, "flights over seat capacity");
  add(unterminated_requests, "requests without exactly one outcome");
  return out;
}

ScanReport scan_run(const sim::Scenario& scenario, const sim::EventLog& log) {
  ScanReport s;
  const auto& net = scenario.network;
  std::map<std::int64_t, std::vector<SlotRef>> slots;
  std::set<std::int64_t> released, departed;
  std::map<std::tuple<int, int>, std::vector<std::int64_t>> corridor_deps;
  std::map<std::int64_t, int> arrivals, outcomes;

  for (const auto& r : log.records()) {
    switch (r.kind) {
      case RecordKind::SlotGranted:
        slots[r.integer(Field::flight)].push_back({r.text(Field::vertidrome), r.integer(Field::fato),
                                                   r.integer(Field::slot_start), 0.0});
        break;
      case RecordKind::SlotReleased: released.insert(r.integer(Field::flight)); break;
      case RecordKind::FlightDeparture: {
        departed.insert(r.integer(Field::flight));
        const int o = net.index_of(r.text(Field::origin));
        const int d = net.index_of(r.text(Field::destination));
        const auto route = net.route(o, d);
        corridor_deps[{route.corridor, vertidrome::Network::direction(o, d)}].push_back(r.t);
        if (r.integer(Field::passengers) > r.integer(Field::seats_capacity)) ++s.seat_overflows;
        break;
      }
      case RecordKind::FlightArrival: {
        const double soc = r.number(Field::soc_after);
        if (soc < 0.0) ++s.negative_soc_arrivals;
        if (soc * r.number(Field::capacity_after) < r.number(Field::energy_used) - 1e-9) ++s.reserve_violations;
        break;
      }
      case RecordKind::RequestArrival: arrivals[r.integer(Field::request)]++; break;
      case RecordKind::RequestOutcome: outcomes[r.integer(Field::request)]++; break;
      default: break;
    }
    if (r.has(Field::stand_occupancy) && r.has(Field::vertidrome)) {
      const auto& v = net.at(net.index_of(r.text(Field::vertidrome)));
      if (r.integer(Field::stand_occupancy) > v.n_stands) ++s.stand_overoccupancy;
    }
  }
  for (const auto& id : departed)
    if (released.count(id)) ++s.cancelled_slots_flown;

  std::map<std::pair<std::string, std::int64_t>, std::vector<std::int64_t>> fato_starts;
  for (const auto& [id, refs] : slots) {
    if (!departed.count(id)) continue;
    for (const auto& ref : refs) fato_starts[{ref.vertidrome, ref.fato}].push_back(ref.start);
  }
  for (auto& [key, starts] : fato_starts) {
    const auto& v = net.at(net.index_of(key.first));
    std::sort(starts.begin(), starts.end());
    for (std::size_t i = 1; i < starts.size(); ++i) {
      const double gap = static_cast<double>(starts[i] - starts[i - 1]);
      if (gap < v.fato_occupancy_s) ++s.fato_overlaps;
      else if (gap < v.fato_occupancy_s + v.min_separation_s) ++s.fato_separation;
    }
  }
  for (auto& [key, deps] : corridor_deps) {
    std::sort(deps.begin(), deps.end());
    for (std::size_t i = 1; i < deps.size(); ++i)
      if (static_cast<double>(deps[i] - deps[i - 1]) < scenario.ops.corridor_separation_s) ++s.corridor_separation;
  }
  for (const auto& [id, n] : arrivals)
    if (n != 1 || outcomes[id] != 1) ++s.unterminated_requests;
  for (const auto& [id, n] : outcomes)
    if (!arrivals.count(id)) ++s.unterminated_requests;
  return s;
}

namespace {

std::ofstream open_out(const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot write " + file.string());
  return out;
}

}  // namespace

void write_table(const std::filesystem::path& file, const Table& t) {
  auto out = open_out(file);
  write_csv(out, t);
}

Table read_table(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot read " + file.string());
  return read_csv(in);
}

void write_run_artifacts(const std::filesystem::path& dir, const sim::Scenario& scenario, const sim::EventLog& log,
                         const nlohmann::json& metadata) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::ios_base::failure("cannot create " + dir.string() + ": " + ec.message());
  {
    auto out = open_out(dir / "events.csv");
    log.write_csv(out);
  }
  {
    auto out = open_out(dir / "events.jsonl");
    log.write_ndjson(out);
  }
  const auto t = build_tables(scenario, log);
  write_table(dir / "flights.csv", t.flights);
  write_table(dir / "requests.csv", t.requests);
  write_table(dir / "battery.csv", t.battery);
  write_table(dir / "vertidromes.csv", t.vertidromes);
  write_table(dir / "costs.csv", t.costs);
  auto m = metrics_from_tables(t);
  if (!metadata.is_null()) m["metadata"] = metadata;
  {
    auto out = open_out(dir / "metrics.json");
    out << m.dump(2) << "\n";
  }
  {
    auto out = open_out(dir / "resolved_config.json");
    out << sim::serialize(scenario);
  }
}

}  // namespace uam::report
