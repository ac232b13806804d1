#include "uam/energy/energy_model.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "uam/error.hpp"

namespace uam::energy {

double Mission::total_distance_km() const noexcept {
  return std::accumulate(legs.begin(), legs.end(), 0.0,
                         [](double acc, const Leg& leg) { return acc + leg.distance_km; });
}

Mission single_leg(double distance_km, int payload, bool reserve_included) {
  return Mission{{Leg{"", "", distance_km}}, payload, reserve_included};
}

Mission design_mission(const VehicleSpec& spec, int payload, bool reserve_included) {
  Mission m;
  m.payload = payload;
  m.reserve_included = reserve_included;
  const int n_legs = spec.design_stops + 1;
  const double leg_km = spec.design_range_km / n_legs;
  for (int i = 0; i < n_legs; ++i)
    m.legs.push_back(Leg{"D" + std::to_string(i), "D" + std::to_string(i + 1), leg_km});
  return m;
}

double reserve_energy(const VehicleSpec& spec) noexcept {
  return spec.energy.p_loiter * spec.reserve_loiter_min;
}

double mission_energy(const VehicleSpec& spec, const Mission& mission) {
  if (mission.legs.empty()) throw DomainError("mission has no legs");
  if (mission.payload < 0) throw DomainError("negative payload");
  if (mission.payload > spec.max_payload_persons)
    throw DomainError("payload " + std::to_string(mission.payload) + " exceeds maximum of " +
                      std::to_string(spec.max_payload_persons) + " persons for " + spec.id);
  const double per_km = spec.energy.per_km(mission.payload);
  double energy = 0.0;
  for (const auto& leg : mission.legs) {
    if (!(leg.distance_km > 0.0)) throw DomainError("leg distance must be positive");
    energy += spec.energy.e_fixed + per_km * leg.distance_km;
  }
  if (mission.reserve_included) energy += reserve_energy(spec);
  return energy;
}

double payload_range(const VehicleSpec& spec, double capacity_fraction, int payload,
                     bool reserve_included) {
  if (!(capacity_fraction > 0.0) || capacity_fraction > 1.0)
    throw DomainError("capacity fraction must be in (0, 1]");
  if (payload < 0 || payload > spec.max_payload_persons)
    throw DomainError("payload outside [0, max_payload_persons]");
  const double budget = capacity_fraction * spec.capacity_nominal - spec.energy.e_fixed -
                        (reserve_included ? reserve_energy(spec) : 0.0);
  if (budget <= 0.0) return 0.0;
  const double per_km = spec.energy.per_km(payload);
  if (per_km <= 0.0) return std::numeric_limits<double>::infinity();
  return budget / per_km;
}

Feasibility mission_feasible(const VehicleSpec& spec, double capacity_fraction, double soc,
                             const Mission& mission) {
  if (soc < 0.0 || soc > 1.0) throw DomainError("state of charge outside [0, 1]");
  Feasibility f;
  f.required = mission_energy(spec, mission);
  f.available = soc * capacity_fraction * spec.capacity_nominal;
  f.feasible = f.required <= f.available;
  f.deficit = f.feasible ? 0.0 : f.required - f.available;
  return f;
}

}  // namespace uam::energy
