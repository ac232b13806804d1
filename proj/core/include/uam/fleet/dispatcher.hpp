#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "uam/battery/battery.hpp"
#include "uam/demand/trips.hpp"
#include "uam/random.hpp"
#include "uam/sim/event_log.hpp"
#include "uam/sim/event_queue.hpp"
#include "uam/sim/scenario.hpp"
#include "uam/vertidrome/corridor.hpp"
#include "uam/vertidrome/slot_table.hpp"
#include "uam/vertidrome/stands.hpp"

namespace uam::fleet {

enum class VehicleStatus { idle, charging, boarding, enroute, maintenance };
enum class FlightStatus { provisional, committed, departed, completed, cancelled };
enum class RejectReason { no_vehicle, no_energy, no_slot, window_unservable };

std::string_view to_string(VehicleStatus s);
std::string_view to_string(FlightStatus s);
std::string_view to_string(RejectReason r);

inline constexpr int kEnroute = -1;

struct Vehicle {
  int index = 0;
  std::string id;
  int spec = 0;
  battery::BatteryState battery;
  int location = 0;  // vertidrome index, kEnroute in flight
  SimTime available_from = 0;
  VehicleStatus status = VehicleStatus::idle;
  std::optional<std::uint64_t> pending_flight;
  std::uint64_t stay = 0;  // stand plan handle at the current location
  double realized_cycle_life = 0.0;  // flights of the last replaced battery
  bool awaiting_stand = false;
};

struct Seat {
  std::uint64_t request = 0;
  int passengers = 0;
};

struct Flight {
  std::uint64_t id = 0;
  int vehicle = 0;
  vertidrome::Route route;
  vertidrome::Slot dep_slot;
  vertidrome::Slot arr_slot;
  vertidrome::Trajectory trajectory;
  int capacity = 0;  // passenger seats
  std::vector<Seat> fixed;
  std::vector<Seat> provisional;
  FlightStatus status = FlightStatus::provisional;
  bool reposition = false;
  double fare_per_seat = 0.0;
  double cycle_life = 0.0;
  std::uint64_t dest_stay = 0;

  int passengers() const noexcept;
  int fixed_passengers() const noexcept;
};

struct Request {
  demand::TripRequest trip;
  bool terminal = false;
};

struct Outcome {
  enum class Kind { pooled, accepted, declined, rejected } kind = Kind::rejected;
  std::optional<std::uint64_t> flight;
  RejectReason reason = RejectReason::no_vehicle;
};

std::string_view to_string(Outcome::Kind k);

// Owns fleet and airside state and runs the per-request pipeline. Handlers
// for queued events live here too so the simulation loop stays a thin
// dispatcher over the queue.
class Dispatcher {
 public:
  Dispatcher(const sim::Scenario& scenario, sim::EventQueue& queue, sim::EventLog& log);

  // Pipeline steps, each also usable on its own.
  std::optional<std::uint64_t> pool_check(const demand::TripRequest& r, SimTime now);
  struct Selection {
    std::optional<int> vehicle;
    RejectReason reason = RejectReason::no_vehicle;
  };
  Selection select_vehicle(int origin, int destination, int payload, SimTime t_max) const;
  struct Scheduled {
    std::optional<std::uint64_t> flight;
    RejectReason reason = RejectReason::no_slot;
  };
  Scheduled schedule_flight(int vehicle, int origin, int destination, SimTime t_min, SimTime t_max, SimTime now,
                            std::optional<std::uint64_t> request);
  void finalize_choice(std::uint64_t flight, const demand::TripRequest& r, bool accept, SimTime now);

  Outcome process_request(std::uint64_t request_index, SimTime now, Rng& choice_rng);

  // Queued event handlers.
  void on_departure(std::uint64_t flight, SimTime now);
  void on_arrival(std::uint64_t flight, SimTime now);
  void on_charge_complete(int vehicle, SimTime now);
  void day_tick(SimTime now);
  // Final per-vehicle battery state.
  void log_run_end(SimTime now);

  // Requests are registered before the run; returns the index.
  std::uint64_t add_request(const demand::TripRequest& r);

  const std::vector<Vehicle>& vehicles() const noexcept { return vehicles_; }
  const std::map<std::uint64_t, Flight>& flights() const noexcept { return flights_; }
  const std::vector<Request>& requests() const noexcept { return requests_; }
  const vertidrome::SlotTable& slot_table(int v) const { return slots_.at(static_cast<std::size_t>(v)); }
  const vertidrome::CorridorTable& corridors() const noexcept { return corridors_; }

  // Energy units needed for the route at a payload, reserve held.
  energy::Mission route_mission(const vertidrome::Route& route, int payload) const;
  int pilot_seats() const noexcept { return scenario_.ops.piloted ? 1 : 0; }
  double fare_for(const Vehicle& v, const vertidrome::Route& route, double* cycle_life = nullptr);
  Vehicle& vehicle_mut(int v) { return vehicles_.at(static_cast<std::size_t>(v)); }

 private:
  const energy::VehicleSpec& spec_of(const Vehicle& v) const;
  void cancel_flight(Flight& f, SimTime now, std::string_view why);
  void commit_flight(Flight& f, SimTime now);
  void start_charging(Vehicle& v, SimTime now);
  void log_outcome(const demand::TripRequest& r, SimTime now, const Outcome& o, const Flight* f,
                   std::optional<demand::Mode> mode);
  void note_no_vehicle(int vertidrome, SimTime now);
  void maybe_reposition(int vertidrome, SimTime now);
  double access_density() const;

  const sim::Scenario& scenario_;
  sim::EventQueue& queue_;
  sim::EventLog& log_;
  std::vector<Vehicle> vehicles_;
  std::map<std::uint64_t, Flight> flights_;
  std::vector<Request> requests_;
  std::vector<vertidrome::SlotTable> slots_;
  std::vector<vertidrome::StandManager> stands_;
  std::vector<vertidrome::StandPlan> plans_;
  vertidrome::CorridorTable corridors_;
  std::map<std::pair<int, int>, double> planning_life_;  // (spec, corridor)
  std::vector<std::deque<SimTime>> no_vehicle_;          // per vertidrome
  std::uint64_t next_flight_ = 0;
  SimTime boarding_;
};

}  // namespace uam::fleet
