#include "uam/sim/event_queue.hpp"

#include <array>
#include <tuple>

#include "uam/error.hpp"

namespace uam::sim {
namespace {

constexpr std::array<std::string_view, 8> kNames = {
    "RequestArrival", "FlightDeparture", "FlightArrival",     "ChargeComplete",
    "BatteryReplaced", "StandAcquired",  "StandReleased",     "RepositionDispatched",
};

}  // namespace

std::string_view to_string(EventKind k) { return kNames[static_cast<std::size_t>(k)]; }

EventKind event_kind_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i)
    if (kNames[i] == name) return static_cast<EventKind>(i);
  throw ConfigError("kind", "unknown event kind " + std::string(name));
}

int rank(EventKind k) noexcept {
  switch (k) {
    case EventKind::FlightArrival: return 0;
    case EventKind::ChargeComplete: return 1;
    case EventKind::StandReleased: return 2;
    case EventKind::FlightDeparture: return 3;
    case EventKind::RequestArrival: return 4;
    default: return 5;
  }
}

bool EventQueue::Later::operator()(const Event& a, const Event& b) const noexcept {
  return std::make_tuple(a.t, rank(a.kind), a.id) > std::make_tuple(b.t, rank(b.kind), b.id);
}

std::uint64_t EventQueue::schedule(SimTime t, EventKind kind, std::uint64_t subject) {
  if (t < clock_) throw DomainError("event scheduled before the current clock");
  const auto id = next_id_++;
  heap_.push(Event{id, t, kind, subject});
  return id;
}

std::optional<Event> EventQueue::pop() {
  if (heap_.empty()) return std::nullopt;
  Event e = heap_.top();
  heap_.pop();
  clock_ = e.t;
  return e;
}

const Event* EventQueue::peek() const { return heap_.empty() ? nullptr : &heap_.top(); }

void EventQueue::advance(SimTime t) {
  if (t < clock_) throw DomainError("clock cannot move backwards");
  clock_ = t;
}

}  // namespace uam::sim
