#include "uam/sim/simulation.hpp"

#include <cmath>
#include <limits>

#include "uam/error.hpp"

namespace uam::sim {

Simulation::Simulation(Scenario scenario)
    : scenario_(std::move(scenario)),
      dispatcher_(scenario_, queue_, log_),
      streams_(scenario_.seed) {
  const auto& net = scenario_.network;
  const auto& d = scenario_.demand;
  const SimTime w_lo = std::llround(d.window_min_min * 60.0);
  const SimTime w_hi = std::llround(d.window_max_min * 60.0);
  std::uint64_t next_id = 0;
  auto enqueue = [&](demand::TripRequest r) {
    const auto idx = dispatcher_.add_request(r);
    queue_.schedule(r.t_request, EventKind::RequestArrival, idx);
  };
  for (const auto& e : d.requests) {
    if (e.t_request >= scenario_.horizon_s) continue;
    demand::TripRequest r;
    r.id = next_id++;
    r.t_request = e.t_request;
    r.origin = net.index_of(e.origin);
    r.destination = net.index_of(e.destination);
    r.passengers = e.passengers;
    r.trip_km = e.trip_km > 0.0 ? e.trip_km : net.distance_km(r.origin, r.destination);
    r.t_min = r.t_request + w_lo;
    r.t_max = r.t_request + w_hi;
    enqueue(r);
  }
  if (d.generate && net.size() >= 2) {
    const int days = static_cast<int>((scenario_.horizon_s + kDay - 1) / kDay);
    for (int day = 0; day < days; ++day) {
      auto rng = streams_.stream("demand", static_cast<std::uint64_t>(day));
      for (auto& r : demand::trip_candidates(d, net, day, rng, next_id)) {
        if (r.t_request >= scenario_.horizon_s) continue;
        r.id = next_id++;
        enqueue(r);
      }
    }
  }
}

void Simulation::run_until(SimTime t_end) {
  if (t_end > scenario_.horizon_s) throw DomainError("run_until: t_end is past the horizon");
  if (t_end < queue_.clock()) throw DomainError("run_until: t_end is before the clock");
  for (;;) {
    const Event* next = queue_.peek();
    const SimTime next_t = next ? next->t : std::numeric_limits<SimTime>::max();
    if (next_tick_ <= t_end && next_tick_ <= next_t) {
      queue_.advance(next_tick_);
      dispatcher_.day_tick(next_tick_);
      next_tick_ += kDay;
      continue;
    }
    if (!next || next->t > t_end) break;
    const Event e = *queue_.pop();
    switch (e.kind) {
      case EventKind::RequestArrival: {
        const auto& q = dispatcher_.requests().at(e.subject).trip;
        auto rng = streams_.stream("mode_choice", q.id);
        dispatcher_.process_request(e.subject, e.t, rng);
        break;
      }
      case EventKind::FlightDeparture: dispatcher_.on_departure(e.subject, e.t); break;
      case EventKind::FlightArrival: dispatcher_.on_arrival(e.subject, e.t); break;
      case EventKind::ChargeComplete: dispatcher_.on_charge_complete(static_cast<int>(e.subject), e.t); break;
      default: {
        auto& r = log_.append(e.t, RecordKind::Anomaly);
        put(r, Field::message, "unhandled queued event " + std::string(to_string(e.kind)));
      }
    }
  }
  queue_.advance(t_end);
}

void Simulation::finish() {
  if (finished_) throw DomainError("simulation already finished");
  finished_ = true;
  dispatcher_.log_run_end(queue_.clock());
}

EventLog run_scenario(const Scenario& scenario, std::optional<SimTime> t_end) {
  Simulation sim(scenario);
  sim.run_until(t_end.value_or(scenario.horizon_s));
  sim.finish();
  return sim.log();
}

}  // namespace uam::sim
