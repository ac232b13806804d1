#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <string_view>
#include <vector>

#include "uam/time.hpp"

namespace uam::sim {

enum class EventKind {
  RequestArrival,
  FlightDeparture,
  FlightArrival,
  ChargeComplete,
  BatteryReplaced,
  StandAcquired,
  StandReleased,
  RepositionDispatched,
};

std::string_view to_string(EventKind k);
// Throws ConfigError for names outside the closed set.
EventKind event_kind_from_string(std::string_view name);

// Same-tick order: resources are freed before they are consumed.
int rank(EventKind k) noexcept;

struct Event {
  std::uint64_t id = 0;
  SimTime t = 0;
  EventKind kind = EventKind::RequestArrival;
  std::uint64_t subject = 0;  // request, flight or vehicle, by kind
};

class EventQueue {
 public:
  // Assigns the id. Throws DomainError when t is before the clock.
  std::uint64_t schedule(SimTime t, EventKind kind, std::uint64_t subject = 0);
  std::optional<Event> pop();
  const Event* peek() const;

  SimTime clock() const noexcept { return clock_; }
  // Moves the clock forward without popping. Throws DomainError if backwards.
  void advance(SimTime t);
  bool empty() const noexcept { return heap_.empty(); }
  std::size_t size() const noexcept { return heap_.size(); }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const noexcept;
  };
  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::uint64_t next_id_ = 0;
  SimTime clock_ = 0;
};

}  // namespace uam::sim
