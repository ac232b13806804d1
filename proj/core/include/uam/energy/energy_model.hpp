#pragma once

#include <string>
#include <vector>

#include "uam/energy/vehicle_spec.hpp"

namespace uam::energy {

struct Leg {
  std::string origin;
  std::string destination;
  double distance_km = 0.0;
};

struct Mission {
  std::vector<Leg> legs;
  int payload = 0;  // persons on board, pilot included when piloted
  bool reserve_included = true;

  double total_distance_km() const noexcept;
};

Mission single_leg(double distance_km, int payload, bool reserve_included = true);

// Design range split into (design_stops + 1) equal legs.
Mission design_mission(const VehicleSpec& spec, int payload, bool reserve_included = true);

double reserve_energy(const VehicleSpec& spec) noexcept;

// Sum over legs of (e_fixed + per_km(payload) * d) plus the loiter reserve
// when the mission holds one. Energy units of C0.
double mission_energy(const VehicleSpec& spec, const Mission& mission);

// Longest single leg at `payload` whose energy (reserve held) fits in
// capacity_fraction * C0. Zero when the fixed and reserve terms alone do not
// fit; infinite when the per-km coefficient is zero.
double payload_range(const VehicleSpec& spec, double capacity_fraction, int payload,
                     bool reserve_included = true);

struct Feasibility {
  bool feasible = false;
  double required = 0.0;   // mission energy
  double available = 0.0;  // soc * capacity_fraction * C0
  double deficit = 0.0;    // max(0, required - available)
};

Feasibility mission_feasible(const VehicleSpec& spec, double capacity_fraction, double soc,
                             const Mission& mission);

}  // namespace uam::energy
