#pragma once

#include <optional>

#include "uam/fleet/dispatcher.hpp"
#include "uam/random.hpp"
#include "uam/sim/event_log.hpp"
#include "uam/sim/event_queue.hpp"
#include "uam/sim/scenario.hpp"

namespace uam::sim {

// One scenario run. Requests (explicit first, then generated day by day) are
// queued at construction; run_until drains the queue with daily aging ticks
// interleaved at multiples of 86400 s.
class Simulation {
 public:
  explicit Simulation(Scenario scenario);
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  // Throws DomainError when t_end is past the horizon or before the clock.
  void run_until(SimTime t_end);
  // Appends the per-vehicle end-of-run records. Call once.
  void finish();

  const Scenario& scenario() const noexcept { return scenario_; }
  const EventLog& log() const noexcept { return log_; }
  const fleet::Dispatcher& dispatcher() const noexcept { return dispatcher_; }
  fleet::Dispatcher& dispatcher() noexcept { return dispatcher_; }
  SimTime clock() const noexcept { return queue_.clock(); }

 private:
  Scenario scenario_;
  EventQueue queue_;
  EventLog log_;
  fleet::Dispatcher dispatcher_;
  RandomStreams streams_;
  SimTime next_tick_ = kDay;
  bool finished_ = false;
};

// Runs to t_end (default: the horizon) and returns the finished log.
EventLog run_scenario(const Scenario& scenario, std::optional<SimTime> t_end = std::nullopt);

}  // namespace uam::sim
