#include "uam/battery/cycle_life.hpp"

#include <algorithm>

#include "uam/error.hpp"

namespace uam::battery {

DutyProfile design_profile(const energy::VehicleSpec& spec, int payload) {
  DutyProfile p;
  p.mission = energy::design_mission(spec, payload, true);
  p.flights_per_day = spec.reference_flights_per_day;
  return p;
}

CycleLife cycles_to_threshold(const energy::VehicleSpec& spec, const AgingParams& aging,
                              const DutyProfile& profile, double threshold, long max_flights) {
  if (profile.flights_per_day < 1) throw DomainError("flights_per_day must be at least 1");
  if (!(threshold > 0.0 && threshold <= 1.0)) throw DomainError("threshold must be in (0, 1]");
  if (threshold < aging.knee_fraction)
    throw DomainError("threshold below the model validity knee");

  energy::Mission flown = profile.mission;
  flown.reserve_included = false;
  energy::Mission held = profile.mission;
  held.reserve_included = true;
  const double need = energy::mission_energy(spec, held);
  const double used = energy::mission_energy(spec, flown);
  const double c0 = spec.capacity_nominal;
  if (need > c0) throw InfeasibleError("profile infeasible on a fresh battery (needs " +
                                       std::to_string(need / c0) + " of nominal)");

  CycleLife out;
  out.flight_dod = used / c0;
  BatteryState b = fresh_battery(c0, aging.temperature_c);
  long n = 0;
  bool done = false;
  while (!done && n < max_flights) {
    if (need > b.capacity_fraction * c0) {
      out.limiting = LimitingFactor::energy_infeasibility;
      out.fractional_cycles = static_cast<double>(n);
      break;
    }
    const double before = b.capacity_fraction;
    b = apply_flight(b, aging, {used / (b.capacity_fraction * c0), 0.0});
    b = charge(b, aging, profile.charge_c_rate).state;
    ++n;
    if (b.capacity_fraction < threshold) {
      out.fractional_cycles = static_cast<double>(n - 1) +
                              (before - threshold) / std::max(before - b.capacity_fraction, 1e-300);
      break;
    }
    if (n % profile.flights_per_day == 0) {
      b = apply_calendar(b, aging, 1.0);
      if (b.capacity_fraction < threshold) {
        out.fractional_cycles = static_cast<double>(n);
        done = true;
      }
    }
  }
  if (n >= max_flights && !done) out.fractional_cycles = static_cast<double>(n);
  out.cycles = n;
  out.days = b.age_days;
  out.calendar_loss = calendar_loss(aging, b.age_days);
  out.cycle_loss = cycle_loss(aging, b);
  out.final_state = b;
  return out;
}

}  // namespace uam::battery
