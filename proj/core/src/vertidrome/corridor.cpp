#include "uam/vertidrome/corridor.hpp"

#include <cmath>

#include "uam/error.hpp"

namespace uam::vertidrome {

SimTime flight_duration(double distance_km, double cruise_speed_kmh) {
  if (!(cruise_speed_kmh > 0.0)) throw DomainError("cruise speed must be positive");
  return std::llround(distance_km / cruise_speed_kmh * 3600.0);
}

SimTime CorridorTable::required_delay(int corridor, int direction, SimTime t_entry) const {
  auto lane = entries_.find({corridor, direction});
  if (lane == entries_.end()) return 0;
  SimTime t = t_entry;
  for (auto it = lane->second.upper_bound(t - separation_); it != lane->second.end(); ++it) {
    if (it->first >= t + separation_) break;
    t = it->first + separation_;
  }
  return t - t_entry;
}

void CorridorTable::book(int corridor, int direction, SimTime t_entry, std::uint64_t flight) {
  if (required_delay(corridor, direction, t_entry) != 0)
    throw DomainError("corridor entry violates separation");
  entries_[{corridor, direction}].emplace(t_entry, flight);
}

void CorridorTable::release(int corridor, int direction, SimTime t_entry) {
  auto lane = entries_.find({corridor, direction});
  if (lane == entries_.end() || lane->second.erase(t_entry) == 0)
    throw DomainError("releasing a corridor entry that is not booked");
}

std::size_t CorridorTable::booked() const noexcept {
  std::size_t n = 0;
  for (const auto& [k, lane] : entries_) n += lane.size();
  return n;
}

Trajectory deconflict_trajectory(const Route& route, SimTime dep_time, const CorridorTable& table,
                                 double cruise_speed_kmh) {
  Trajectory t;
  t.ground_delay = table.required_delay(route.corridor, Network::direction(route.origin, route.destination),
                                        dep_time);
  t.t_dep = dep_time + t.ground_delay;
  t.t_arr = t.t_dep + flight_duration(route.distance_km, cruise_speed_kmh);
  return t;
}

}  // namespace uam::vertidrome
