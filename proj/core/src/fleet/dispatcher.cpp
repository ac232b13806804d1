#include "uam/fleet/dispatcher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "uam/demand/choice.hpp"
#include "uam/demand/market.hpp"
#include "uam/econ/cost_model.hpp"
#include "uam/energy/energy_model.hpp"
#include "uam/error.hpp"

namespace uam::fleet {

using sim::Field;
using sim::RecordKind;
using sim::put;

namespace {

constexpr SimTime kUnavailable = std::numeric_limits<SimTime>::max() / 4;

std::int64_t I(std::uint64_t x) { return static_cast<std::int64_t>(x); }
std::int64_t I(int x) { return x; }
std::int64_t I(std::int64_t x) { return x; }

std::string_view movement_name(vertidrome::Movement m) {
  return m == vertidrome::Movement::arrival ? "arrival" : "departure";
}

}  // namespace

std::string_view to_string(VehicleStatus s) {
  switch (s) {
    case VehicleStatus::idle: return "idle";
    case VehicleStatus::charging: return "charging";
    case VehicleStatus::boarding: return "boarding";
    case VehicleStatus::enroute: return "enroute";
    case VehicleStatus::maintenance: return "maintenance";
  }
  return "?";
}

std::string_view to_string(FlightStatus s) {
  switch (s) {
    case FlightStatus::provisional: return "provisional";
    case FlightStatus::committed: return "committed";
    case FlightStatus::departed: return "departed";
    case FlightStatus::completed: return "completed";
    case FlightStatus::cancelled: return "cancelled";
  }
  return "?";
}

std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::no_vehicle: return "no_vehicle";
    case RejectReason::no_energy: return "no_energy";
    case RejectReason::no_slot: return "no_slot";
    case RejectReason::window_unservable: return "window_unservable";
  }
  return "?";
}

std::string_view to_string(Outcome::Kind k) {
  switch (k) {
    case Outcome::Kind::pooled: return "pooled";
    case Outcome::Kind::accepted: return "accepted";
    case Outcome::Kind::declined: return "declined";
    case Outcome::Kind::rejected: return "rejected";
  }
  return "?";
}

int Flight::passengers() const noexcept {
  int n = 0;
  for (const auto& s : fixed) n += s.passengers;
  for (const auto& s : provisional) n += s.passengers;
  return n;
}

int Flight::fixed_passengers() const noexcept {
  int n = 0;
  for (const auto& s : fixed) n += s.passengers;
  return n;
}

Dispatcher::Dispatcher(const sim::Scenario& scenario, sim::EventQueue& queue, sim::EventLog& log)
    : scenario_(scenario),
      queue_(queue),
      log_(log),
      corridors_(std::llround(scenario.ops.corridor_separation_s)),
      no_vehicle_(scenario.network.size()),
      boarding_(std::llround(scenario.ops.boarding_min * 60.0)) {
  const auto& net = scenario.network;
  for (std::size_t i = 0; i < net.size(); ++i) {
    const auto& v = net.nodes()[i];
    slots_.emplace_back(static_cast<int>(i), v, scenario.horizon_s);
    stands_.emplace_back(v.n_stands);
    plans_.emplace_back(v.n_stands);
  }
  for (std::size_t i = 0; i < scenario.fleet.vehicles.size(); ++i) {
    const auto& c = scenario.fleet.vehicles[i];
    Vehicle v;
    v.index = static_cast<int>(i);
    v.id = c.id;
    v.spec = scenario.fleet.spec_index(c.spec);
    v.battery = battery::fresh_battery(scenario.fleet.specs[static_cast<std::size_t>(v.spec)].capacity_nominal,
                                       scenario.aging.temperature_c);
    v.location = net.index_of(c.home);
    v.stay = plans_[static_cast<std::size_t>(v.location)].add(0, vertidrome::kOpenEnd);
    stands_[static_cast<std::size_t>(v.location)].acquire(v.index);
    vehicles_.push_back(std::move(v));
  }
}

const energy::VehicleSpec& Dispatcher::spec_of(const Vehicle& v) const {
  return scenario_.fleet.specs[static_cast<std::size_t>(v.spec)];
}

std::uint64_t Dispatcher::add_request(const demand::TripRequest& r) {
  requests_.push_back(Request{r, false});
  return requests_.size() - 1;
}

energy::Mission Dispatcher::route_mission(const vertidrome::Route& route, int payload) const {
  return energy::single_leg(route.distance_km, payload, true);
}

double Dispatcher::access_density() const {
  const auto& city = scenario_.demand.city;
  if (city.vertiport_density > 0.0) return city.vertiport_density;
  if (city.area_km2 > 0.0) return static_cast<double>(scenario_.network.size()) / city.area_km2 * 100.0;
  return 1.0;
}

double Dispatcher::fare_for(const Vehicle& v, const vertidrome::Route& route, double* cycle_life) {
  const auto& spec = spec_of(v);
  const auto params = scenario_.econ.params(spec.id);
  const auto full = route_mission(route, spec.max_payload_persons);
  double life = v.realized_cycle_life;
  if (life <= 0.0) {
    const auto key = std::make_pair(v.spec, route.corridor);
    auto it = planning_life_.find(key);
    if (it == planning_life_.end()) {
      double planned = 1.0;
      try {
        planned = econ::planning_cycle_life(spec, full, scenario_.aging, params);
      } catch (const InfeasibleError&) {
        // The full-load mission does not fit; fares are priced off a
        // single-flight life and will not sell.
      }
      it = planning_life_.emplace(key, planned).first;
    }
    life = it->second;
  }
  if (cycle_life) *cycle_life = life;
  const auto cb = econ::flight_cost(spec, full, life, params, scenario_.ops.piloted);
  return econ::fare_per_seat(cb, params.margin, std::max(1, econ::passenger_seats(spec, scenario_.ops.piloted)));
}

std::optional<std::uint64_t> Dispatcher::pool_check(const demand::TripRequest& r, SimTime /*now*/) {
  const Flight* best = nullptr;
  for (const auto& [id, f] : flights_) {
    if (f.status != FlightStatus::committed || f.reposition) continue;
    if (f.route.origin != r.origin || f.route.destination != r.destination) continue;
    const SimTime t_dep = f.dep_slot.t_start;
    if (t_dep < r.t_min || t_dep > r.t_max) continue;
    if (f.capacity - f.passengers() < r.passengers) continue;
    const auto& v = vehicles_[static_cast<std::size_t>(f.vehicle)];
    const auto& spec = spec_of(v);
    const int payload = f.passengers() + r.passengers + pilot_seats();
    if (payload > spec.max_payload_persons) continue;
    if (!energy::mission_feasible(spec, v.battery.capacity_fraction, 1.0, route_mission(f.route, payload)).feasible)
      continue;
    if (!best || std::make_tuple(t_dep, f.id) < std::make_tuple(best->dep_slot.t_start, best->id)) best = &f;
  }
  if (!best) return std::nullopt;
  return best->id;
}

Dispatcher::Selection Dispatcher::select_vehicle(int origin, int destination, int payload, SimTime t_max) const {
  Selection out;
  const auto route = scenario_.network.route(origin, destination);
  bool any = false;
  const Vehicle* best = nullptr;
  for (const auto& v : vehicles_) {
    if (v.location != origin || v.pending_flight || v.battery.beyond_model_validity || v.awaiting_stand) continue;
    if (v.status != VehicleStatus::idle && v.status != VehicleStatus::charging) continue;
    const auto& spec = spec_of(v);
    if (payload > spec.max_payload_persons || payload > spec.seats) continue;
    if (v.available_from + boarding_ > t_max) continue;
    any = true;
    if (!energy::mission_feasible(spec, v.battery.capacity_fraction, 1.0, route_mission(route, payload)).feasible)
      continue;
    // Everyone here is at the origin, so the distance key is zero.
    if (!best || std::make_tuple(v.available_from, v.index) < std::make_tuple(best->available_from, best->index))
      best = &v;
  }
  if (best) out.vehicle = best->index;
  else out.reason = any ? RejectReason::no_energy : RejectReason::no_vehicle;
  return out;
}

Dispatcher::Scheduled Dispatcher::schedule_flight(int vehicle, int origin, int destination, SimTime t_min,
                                                  SimTime t_max, SimTime now,
                                                  std::optional<std::uint64_t> request) {
  Scheduled out;
  Vehicle& v = vehicles_.at(static_cast<std::size_t>(vehicle));
  const auto& spec = spec_of(v);
  const auto route = scenario_.network.route(origin, destination);
  const int dir = vertidrome::Network::direction(origin, destination);
  const SimTime block = vertidrome::flight_duration(route.distance_km, spec.cruise_speed_kmh);
  auto& dep_table = slots_[static_cast<std::size_t>(origin)];
  auto& arr_table = slots_[static_cast<std::size_t>(destination)];
  auto& plan = plans_[static_cast<std::size_t>(destination)];

  const SimTime t0 = std::max(t_min, std::max(now, v.available_from) + boarding_);
  SimTime t = t0;
  RejectReason last = RejectReason::window_unservable;
  std::optional<vertidrome::SlotTable::Candidate> dep, arr;
  bool found = false;
  while (t <= t_max) {
    dep = dep_table.probe(t);
    if (!dep || dep->t_start > t_max) {
      last = RejectReason::no_slot;
      break;
    }
    const SimTime delay = corridors_.required_delay(route.corridor, dir, dep->t_start);
    if (delay > 0) {
      t = dep->t_start + delay;
      last = RejectReason::window_unservable;
      continue;
    }
    const SimTime t_arr = dep->t_start + block;
    arr = arr_table.probe(t_arr);
    if (!arr) {
      last = RejectReason::no_slot;
      break;
    }
    if (arr->t_start != t_arr) {
      t = dep->t_start + (arr->t_start - t_arr);
      last = RejectReason::no_slot;
      continue;
    }
    if (!plan.fits(t_arr, vertidrome::kOpenEnd)) {
      const auto next = plan.next_release_after(t_arr);
      last = RejectReason::window_unservable;
      if (!next) break;
      t = dep->t_start + (*next + 1 - t_arr);
      continue;
    }
    found = true;
    break;
  }
  if (!found) {
    out.reason = last;
    return out;
  }

  Flight f;
  f.id = next_flight_++;
  f.vehicle = vehicle;
  f.route = route;
  f.dep_slot = dep_table.book(dep->fato, dep->t_start, vertidrome::Movement::departure, t0);
  f.arr_slot = arr_table.book(arr->fato, arr->t_start, vertidrome::Movement::arrival, t0 + block);
  corridors_.book(route.corridor, dir, f.dep_slot.t_start, f.id);
  f.trajectory = {f.dep_slot.t_start, f.arr_slot.t_start, f.dep_slot.t_start - t0};
  f.capacity = std::max(0, std::min(spec.seats, spec.max_payload_persons) - pilot_seats());
  f.dest_stay = plan.add(f.arr_slot.t_start, vertidrome::kOpenEnd);
  plans_[static_cast<std::size_t>(origin)].set_until(v.stay, f.dep_slot.t_start);
  f.fare_per_seat = fare_for(v, route, &f.cycle_life);
  v.pending_flight = f.id;

  const auto& net = scenario_.network;
  auto& r = log_.append(now, RecordKind::FlightScheduled);
  put(r, Field::flight, I(f.id));
  put(r, Field::vehicle, v.id);
  if (request) put(r, Field::request, I(*request));
  put(r, Field::origin, net.at(origin).id);
  put(r, Field::destination, net.at(destination).id);
  put(r, Field::distance_km, route.distance_km);
  put(r, Field::t_dep, f.dep_slot.t_start);
  put(r, Field::t_arr, f.arr_slot.t_start);
  put(r, Field::ground_delay_s, f.trajectory.ground_delay);
  put(r, Field::corridor, I(route.corridor));
  put(r, Field::seats_capacity, I(f.capacity));
  put(r, Field::fare_per_seat, f.fare_per_seat);
  put(r, Field::cycle_life, f.cycle_life);
  for (const auto* s : {&f.dep_slot, &f.arr_slot}) {
    auto& g = log_.append(now, RecordKind::SlotGranted);
    put(g, Field::flight, I(f.id));
    put(g, Field::vertidrome, net.at(s->vertidrome).id);
    put(g, Field::fato, I(s->fato));
    put(g, Field::movement, std::string(movement_name(s->movement)));
    put(g, Field::slot_start, s->t_start);
    put(g, Field::slot_delay_s, s->delay());
  }
  out.flight = f.id;
  flights_.emplace(f.id, std::move(f));
  return out;
}

void Dispatcher::commit_flight(Flight& f, SimTime now) {
  f.status = FlightStatus::committed;
  queue_.schedule(f.dep_slot.t_start, sim::EventKind::FlightDeparture, f.id);
  auto& r = log_.append(now, RecordKind::FlightCommitted);
  put(r, Field::flight, I(f.id));
  put(r, Field::vehicle, vehicles_[static_cast<std::size_t>(f.vehicle)].id);
  put(r, Field::t_dep, f.dep_slot.t_start);
  put(r, Field::seats_fixed, I(f.fixed_passengers()));
  put(r, Field::reposition, I(f.reposition ? 1 : 0));
}

void Dispatcher::cancel_flight(Flight& f, SimTime now, std::string_view why) {
  const auto& net = scenario_.network;
  for (const auto* s : {&f.dep_slot, &f.arr_slot}) {
    slots_[static_cast<std::size_t>(s->vertidrome)].release(*s);
    auto& r = log_.append(now, RecordKind::SlotReleased);
    put(r, Field::flight, I(f.id));
    put(r, Field::vertidrome, net.at(s->vertidrome).id);
    put(r, Field::fato, I(s->fato));
    put(r, Field::movement, std::string(movement_name(s->movement)));
    put(r, Field::slot_start, s->t_start);
  }
  corridors_.release(f.route.corridor, vertidrome::Network::direction(f.route.origin, f.route.destination),
                     f.dep_slot.t_start);
  Vehicle& v = vehicles_[static_cast<std::size_t>(f.vehicle)];
  plans_[static_cast<std::size_t>(f.route.destination)].remove(f.dest_stay);
  plans_[static_cast<std::size_t>(f.route.origin)].set_until(v.stay, vertidrome::kOpenEnd);
  v.pending_flight.reset();
  f.status = FlightStatus::cancelled;
  auto& r = log_.append(now, RecordKind::FlightCancelled);
  put(r, Field::flight, I(f.id));
  put(r, Field::vehicle, v.id);
  put(r, Field::message, std::string(why));
}

void Dispatcher::finalize_choice(std::uint64_t flight, const demand::TripRequest& req, bool accept, SimTime now) {
  Flight& f = flights_.at(flight);
  auto it = std::find_if(f.provisional.begin(), f.provisional.end(),
                         [&](const Seat& s) { return s.request == req.id; });
  if (it == f.provisional.end()) throw DomainError("no provisional seat for request");
  const Seat seat = *it;
  f.provisional.erase(it);
  if (accept) {
    f.fixed.push_back(seat);
    if (f.status == FlightStatus::provisional) commit_flight(f, now);
  } else if (f.status == FlightStatus::provisional && f.fixed.empty() && f.provisional.empty()) {
    cancel_flight(f, now, "declined");
  }
}

void Dispatcher::log_outcome(const demand::TripRequest& q, SimTime now, const Outcome& o, const Flight* f,
                             std::optional<demand::Mode> mode) {
  auto& r = log_.append(now, RecordKind::RequestOutcome);
  put(r, Field::request, I(q.id));
  put(r, Field::outcome, std::string(to_string(o.kind)));
  if (o.kind == Outcome::Kind::rejected) put(r, Field::reason, std::string(to_string(o.reason)));
  if (f) {
    put(r, Field::flight, I(f->id));
    put(r, Field::fare_per_seat, f->fare_per_seat);
    put(r, Field::seats_fixed, I(f->fixed_passengers()));
  }
  put(r, Field::passengers, I(q.passengers));
  if (mode) put(r, Field::mode, std::string(demand::to_string(*mode)));
}

Outcome Dispatcher::process_request(std::uint64_t index, SimTime now, Rng& rng) {
  Request& req = requests_.at(index);
  const auto& q = req.trip;
  const auto& net = scenario_.network;
  {
    auto& r = log_.append(now, RecordKind::RequestArrival);
    put(r, Field::request, I(q.id));
    put(r, Field::origin, net.at(q.origin).id);
    put(r, Field::destination, net.at(q.destination).id);
    put(r, Field::passengers, I(q.passengers));
    put(r, Field::trip_km, q.trip_km);
    put(r, Field::t_min, q.t_min);
    put(r, Field::t_max, q.t_max);
  }
  Outcome out;
  req.terminal = true;

  // Step 1: an existing flight.
  std::optional<std::uint64_t> hit;
  if (scenario_.ops.pooling) hit = pool_check(q, now);
  {
    auto& r = log_.append(now, RecordKind::PoolCheck);
    put(r, Field::request, I(q.id));
    put(r, Field::outcome, std::string(!scenario_.ops.pooling ? "disabled" : hit ? "hit" : "miss"));
    if (hit) put(r, Field::flight, I(*hit));
  }
  if (hit) {
    Flight& f = flights_.at(*hit);
    f.fixed.push_back(Seat{q.id, q.passengers});
    out.kind = Outcome::Kind::pooled;
    out.flight = f.id;
    log_outcome(q, now, out, &f, demand::Mode::uam);
    return out;
  }

  // Step 2: a new flight.
  const int payload = q.passengers + pilot_seats();
  const auto sel = select_vehicle(q.origin, q.destination, payload, q.t_max);
  if (!sel.vehicle) {
    out.reason = sel.reason;
    log_outcome(q, now, out, nullptr, std::nullopt);
    if (sel.reason == RejectReason::no_vehicle) note_no_vehicle(q.origin, now);
    return out;
  }
  const auto sch = schedule_flight(*sel.vehicle, q.origin, q.destination, q.t_min, q.t_max, now, q.id);
  if (!sch.flight) {
    out.reason = sch.reason;
    log_outcome(q, now, out, nullptr, std::nullopt);
    return out;
  }
  Flight& f = flights_.at(*sch.flight);
  f.provisional.push_back(Seat{q.id, q.passengers});

  // Step 3: offer and mode choice.
  const auto& market = scenario_.demand.market;
  const double density = access_density();
  const double uam_time = demand::access_time(density, market) + demand::access_leg(density, market) +
                          static_cast<double>(f.dep_slot.t_start - q.t_request) / 60.0 +
                          static_cast<double>(f.arr_slot.t_start - f.dep_slot.t_start) / 60.0;
  const double trip_km = q.trip_km > 0.0 ? q.trip_km : f.route.distance_km;
  const demand::ModeOffer offer{{demand::Mode::uam, uam_time, f.fare_per_seat},
                                demand::ground_alternative(demand::Mode::car, trip_km, market),
                                demand::ground_alternative(demand::Mode::transit, trip_km, market)};
  const auto probs = demand::mode_probabilities(offer, market.choice);
  const auto pick = demand::draw_index(probs, rng);
  {
    auto& r = log_.append(now, RecordKind::OfferMade);
    put(r, Field::request, I(q.id));
    put(r, Field::flight, I(f.id));
    put(r, Field::t_dep, f.dep_slot.t_start);
    put(r, Field::fare_per_seat, f.fare_per_seat);
    put(r, Field::p_uam, probs[0]);
  }

  // Step 4: finalize.
  const bool accept = pick == 0;
  finalize_choice(f.id, q, accept, now);
  out.kind = accept ? Outcome::Kind::accepted : Outcome::Kind::declined;
  out.flight = f.id;
  log_outcome(q, now, out, &flights_.at(f.id), offer[pick].mode);
  return out;
}

void Dispatcher::start_charging(Vehicle& v, SimTime now) {
  const double c_rate = scenario_.network.at(v.location).charge_c_rate;
  const SimTime duration = std::llround((1.0 - v.battery.soc) * 3600.0 / c_rate);
  v.status = VehicleStatus::charging;
  v.available_from = now + duration;
  queue_.schedule(now + duration, sim::EventKind::ChargeComplete, static_cast<std::uint64_t>(v.index));
}

void Dispatcher::on_departure(std::uint64_t flight, SimTime now) {
  Flight& f = flights_.at(flight);
  Vehicle& v = vehicles_[static_cast<std::size_t>(f.vehicle)];
  const auto& spec = spec_of(v);
  const auto& net = scenario_.network;
  if (f.status != FlightStatus::committed) {
    auto& r = log_.append(now, RecordKind::Anomaly);
    put(r, Field::flight, I(f.id));
    put(r, Field::message, std::string("departure of a flight that is not committed"));
    return;
  }
  const int payload = f.fixed_passengers() + pilot_seats();
  const auto mission = route_mission(f.route, payload);
  auto flown = mission;
  flown.reserve_included = false;
  const double used = energy::mission_energy(spec, flown);
  const double soc_before = v.battery.soc;
  const double cap_before = v.battery.capacity_fraction;
  if (!energy::mission_feasible(spec, cap_before, soc_before, mission).feasible) {
    auto& r = log_.append(now, RecordKind::Anomaly);
    put(r, Field::flight, I(f.id));
    put(r, Field::vehicle, v.id);
    put(r, Field::message, std::string("reserve not held at departure"));
  }
  const double dod = used / (cap_before * v.battery.c0);
  try {
    v.battery = battery::apply_flight(v.battery, scenario_.aging,
                                      {dod, static_cast<double>(f.arr_slot.t_start - f.dep_slot.t_start)});
  } catch (const std::exception& e) {
    auto& r = log_.append(now, RecordKind::Anomaly);
    put(r, Field::flight, I(f.id));
    put(r, Field::vehicle, v.id);
    put(r, Field::message, std::string(e.what()));
    v.battery.soc = std::max(0.0, v.battery.soc - dod);
  }

  const int origin = f.route.origin;
  auto& stands = stands_[static_cast<std::size_t>(origin)];
  if (v.awaiting_stand) {
    stands.release(v.index);
    v.awaiting_stand = false;
  } else {
    const auto next = stands.release(v.index);
    auto& r = log_.append(now, RecordKind::StandReleased);
    put(r, Field::vehicle, v.id);
    put(r, Field::vertidrome, net.at(origin).id);
    put(r, Field::stand_occupancy, I(stands.occupied()));
    if (next) {
      Vehicle& w = vehicles_[static_cast<std::size_t>(*next)];
      w.awaiting_stand = false;
      auto& a = log_.append(now, RecordKind::StandAcquired);
      put(a, Field::vehicle, w.id);
      put(a, Field::vertidrome, net.at(origin).id);
      put(a, Field::stand_occupancy, I(stands.occupied()));
      start_charging(w, now);
    }
  }
  plans_[static_cast<std::size_t>(origin)].remove(v.stay);
  v.status = VehicleStatus::enroute;
  v.location = kEnroute;

  const auto params = scenario_.econ.params(spec.id);
  const auto cb = econ::flight_cost(spec, mission, f.cycle_life, params, scenario_.ops.piloted);
  const double revenue = f.reposition ? 0.0 : f.fare_per_seat * f.fixed_passengers();
  f.status = FlightStatus::departed;

  auto& r = log_.append(now, RecordKind::FlightDeparture);
  put(r, Field::flight, I(f.id));
  put(r, Field::vehicle, v.id);
  put(r, Field::origin, net.at(f.route.origin).id);
  put(r, Field::destination, net.at(f.route.destination).id);
  put(r, Field::passengers, I(f.fixed_passengers()));
  put(r, Field::seats_capacity, I(f.capacity));
  put(r, Field::distance_km, f.route.distance_km);
  put(r, Field::t_dep, f.dep_slot.t_start);
  put(r, Field::t_arr, f.arr_slot.t_start);
  put(r, Field::soc_before, soc_before);
  put(r, Field::soc_after, v.battery.soc);
  put(r, Field::capacity_before, cap_before);
  put(r, Field::capacity_after, v.battery.capacity_fraction);
  put(r, Field::energy_used, used);
  put(r, Field::dod, dod);
  put(r, Field::block_hours, cb.block_hours);
  put(r, Field::cost_energy, cb.energy);
  put(r, Field::cost_battery, cb.battery_depreciation);
  put(r, Field::cost_maintenance, cb.maintenance);
  put(r, Field::cost_crew, cb.crew);
  put(r, Field::cost_capital, cb.capital);
  put(r, Field::cost_insurance, cb.insurance);
  put(r, Field::cost_fees, cb.fees);
  put(r, Field::cost_indirect, cb.indirect);
  put(r, Field::cost_total, cb.total);
  put(r, Field::revenue, revenue);
  put(r, Field::fare_per_seat, f.fare_per_seat);
  put(r, Field::fare_per_km, f.fare_per_seat / f.route.distance_km);
  put(r, Field::cycle_life, f.cycle_life);
  put(r, Field::use_case, f.reposition ? std::string("reposition") : scenario_.ops.use_case);
  put(r, Field::reposition, I(f.reposition ? 1 : 0));
  queue_.schedule(f.arr_slot.t_start, sim::EventKind::FlightArrival, f.id);
}

void Dispatcher::on_arrival(std::uint64_t flight, SimTime now) {
  Flight& f = flights_.at(flight);
  Vehicle& v = vehicles_[static_cast<std::size_t>(f.vehicle)];
  const auto& spec = spec_of(v);
  const auto& net = scenario_.network;
  const int dest = f.route.destination;
  f.status = FlightStatus::completed;
  v.location = dest;
  v.stay = f.dest_stay;
  v.pending_flight.reset();
  {
    auto& r = log_.append(now, RecordKind::FlightArrival);
    put(r, Field::flight, I(f.id));
    put(r, Field::vehicle, v.id);
    put(r, Field::vertidrome, net.at(dest).id);
    put(r, Field::soc_after, v.battery.soc);
    put(r, Field::capacity_after, v.battery.capacity_fraction);
    put(r, Field::energy_used, energy::reserve_energy(spec));
  }
  auto& stands = stands_[static_cast<std::size_t>(dest)];
  const auto stand = stands.acquire(v.index);
  if (stand) {
    auto& r = log_.append(now, RecordKind::StandAcquired);
    put(r, Field::vehicle, v.id);
    put(r, Field::vertidrome, net.at(dest).id);
    put(r, Field::stand, I(*stand));
    put(r, Field::stand_occupancy, I(stands.occupied()));
    start_charging(v, now);
  } else {
    v.awaiting_stand = true;
    v.status = VehicleStatus::charging;
    v.available_from = kUnavailable;
    auto& r = log_.append(now, RecordKind::ApronCongestion);
    put(r, Field::vehicle, v.id);
    put(r, Field::vertidrome, net.at(dest).id);
    put(r, Field::queue_length, I(stands.waiting()));
  }
}

void Dispatcher::on_charge_complete(int vehicle, SimTime now) {
  Vehicle& v = vehicles_.at(static_cast<std::size_t>(vehicle));
  if (v.status != VehicleStatus::charging || v.available_from != now) return;  // superseded
  const double c_rate = scenario_.network.at(v.location).charge_c_rate;
  const double soc_before = v.battery.soc;
  const auto res = battery::charge(v.battery, scenario_.aging, c_rate, 1.0);
  v.battery = res.state;
  v.status = VehicleStatus::idle;
  auto& r = log_.append(now, RecordKind::ChargeComplete);
  put(r, Field::vehicle, v.id);
  put(r, Field::vertidrome, scenario_.network.at(v.location).id);
  put(r, Field::soc_before, soc_before);
  put(r, Field::soc_after, v.battery.soc);
  put(r, Field::charge_duration_s, res.duration_s);
  put(r, Field::capacity_after, v.battery.capacity_fraction);
  put(r, Field::throughput_fec, v.battery.throughput_fec);
}

void Dispatcher::day_tick(SimTime now) {
  const std::int64_t day = now / kDay;
  for (auto& v : vehicles_) {
    const auto& spec = spec_of(v);
    const double before = v.battery.capacity_fraction;
    v.battery = battery::apply_calendar(v.battery, scenario_.aging, 1.0);
    {
      auto& r = log_.append(now, RecordKind::CalendarAging);
      put(r, Field::vehicle, v.id);
      put(r, Field::day, day);
      put(r, Field::age_days, v.battery.age_days);
      put(r, Field::capacity_before, before);
      put(r, Field::capacity_after, v.battery.capacity_fraction);
      put(r, Field::throughput_fec, v.battery.throughput_fec);
      put(r, Field::flight_cycles, I(v.battery.flight_cycles));
    }
    if (battery::replacement_policy(v.battery, scenario_.aging, spec) != battery::ReplacementDecision::replace) continue;
    if (v.status == VehicleStatus::enroute || v.pending_flight) continue;  // retried at the next tick
    auto& r = log_.append(now, RecordKind::BatteryReplaced);
    put(r, Field::vehicle, v.id);
    put(r, Field::day, day);
    put(r, Field::age_days, v.battery.age_days);
    put(r, Field::flight_cycles, I(v.battery.flight_cycles));
    put(r, Field::capacity_before, v.battery.capacity_fraction);
    put(r, Field::throughput_fec, v.battery.throughput_fec);
    v.realized_cycle_life = std::max<double>(1.0, static_cast<double>(v.battery.flight_cycles));
    put(r, Field::cycle_life, v.realized_cycle_life);
    v.battery = battery::fresh_battery(v.battery.c0, scenario_.aging.temperature_c);
    if (v.status == VehicleStatus::charging && !v.awaiting_stand) {
      // A full pack ends the charge now.
      v.available_from = now;
      queue_.schedule(now, sim::EventKind::ChargeComplete, static_cast<std::uint64_t>(v.index));
    }
  }
}

void Dispatcher::log_run_end(SimTime now) {
  for (const auto& v : vehicles_) {
    auto& r = log_.append(now, RecordKind::RunEnd);
    put(r, Field::vehicle, v.id);
    put(r, Field::day, static_cast<double>(now) / static_cast<double>(kDay));
    put(r, Field::soc_after, v.battery.soc);
    put(r, Field::capacity_after, v.battery.capacity_fraction);
    put(r, Field::age_days, v.battery.age_days);
    put(r, Field::flight_cycles, I(v.battery.flight_cycles));
    put(r, Field::throughput_fec, v.battery.throughput_fec);
    put(r, Field::message, std::string(v.battery.beyond_model_validity ? "beyond_knee" : ""));
  }
}

void Dispatcher::note_no_vehicle(int vertidrome, SimTime now) {
  if (!scenario_.ops.reposition.enabled) return;
  auto& q = no_vehicle_[static_cast<std::size_t>(vertidrome)];
  q.push_back(now);
  const SimTime window = std::llround(scenario_.ops.reposition.window_min * 60.0);
  while (!q.empty() && q.front() < now - window) q.pop_front();
  if (static_cast<int>(q.size()) >= scenario_.ops.reposition.threshold) maybe_reposition(vertidrome, now);
}

void Dispatcher::maybe_reposition(int target, SimTime now) {
  const auto& net = scenario_.network;
  std::vector<int> present(net.size(), 0);
  for (const auto& v : vehicles_)
    if (v.location != kEnroute) ++present[static_cast<std::size_t>(v.location)];
  const Vehicle* best = nullptr;
  double best_d = 0.0;
  for (const auto& v : vehicles_) {
    if (v.location == kEnroute || v.location == target || v.pending_flight || v.awaiting_stand) continue;
    if (v.battery.beyond_model_validity) continue;
    if (v.status != VehicleStatus::idle && v.status != VehicleStatus::charging) continue;
    if (present[static_cast<std::size_t>(v.location)] < 2) continue;
    const auto& spec = spec_of(v);
    const auto route = net.route(v.location, target);
    if (!energy::mission_feasible(spec, v.battery.capacity_fraction, 1.0, route_mission(route, pilot_seats())).feasible)
      continue;
    const double d = route.distance_km;
    if (!best || std::make_tuple(d, v.available_from, v.index) < std::make_tuple(best_d, best->available_from, best->index)) {
      best = &v;
      best_d = d;
    }
  }
  if (!best) return;
  const int origin = best->location;
  const SimTime horizon = std::llround(scenario_.demand.window_max_min * 60.0);
  const auto sch = schedule_flight(best->index, origin, target, now, now + horizon, now, std::nullopt);
  if (!sch.flight) return;
  Flight& f = flights_.at(*sch.flight);
  f.reposition = true;
  f.fare_per_seat = 0.0;
  commit_flight(f, now);
  no_vehicle_[static_cast<std::size_t>(target)].clear();
  auto& r = log_.append(now, RecordKind::RepositionDispatched);
  put(r, Field::vehicle, best->id);
  put(r, Field::flight, I(f.id));
  put(r, Field::origin, net.at(origin).id);
  put(r, Field::destination, net.at(target).id);
  put(r, Field::t_dep, f.dep_slot.t_start);
}

}  // namespace uam::fleet
