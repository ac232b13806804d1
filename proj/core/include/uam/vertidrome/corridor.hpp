#pragma once

#include <cstdint>
#include <map>
#include <utility>

#include "uam/time.hpp"
#include "uam/vertidrome/network.hpp"

namespace uam::vertidrome {

// Block time of a straight cruise, rounded to whole seconds.
SimTime flight_duration(double distance_km, double cruise_speed_kmh);

struct Trajectory {
  SimTime t_dep = 0;  // corridor entry
  SimTime t_arr = 0;
  SimTime ground_delay = 0;
};

// Entry times per corridor and direction. Same-direction entries must be at
// least `separation_s` apart; the two directions fly separate layers.
class CorridorTable {
 public:
  explicit CorridorTable(SimTime separation_s = 60) : separation_(separation_s) {}

  SimTime separation() const noexcept { return separation_; }

  // Smallest d >= 0 such that entry at t + d keeps separation.
  SimTime required_delay(int corridor, int direction, SimTime t_entry) const;
  void book(int corridor, int direction, SimTime t_entry, std::uint64_t flight);
  void release(int corridor, int direction, SimTime t_entry);
  std::size_t booked() const noexcept;

 private:
  SimTime separation_;
  std::map<std::pair<int, int>, std::map<SimTime, std::uint64_t>> entries_;
};

// Ground delay needed on `route` for a departure at dep_time, and the
// resulting trajectory. Does not book.
Trajectory deconflict_trajectory(const Route& route, SimTime dep_time, const CorridorTable& table,
                                 double cruise_speed_kmh);

}  // namespace uam::vertidrome
