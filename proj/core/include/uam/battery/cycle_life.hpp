#pragma once

#include "uam/battery/battery.hpp"
#include "uam/energy/energy_model.hpp"

namespace uam::battery {

struct DutyProfile {
  energy::Mission mission;  // flown repeatedly; reserve held, not flown
  int flights_per_day = 1;
  double charge_c_rate = 1.0;
};

enum class LimitingFactor { threshold, energy_infeasibility };

struct CycleLife {
  long cycles = 0;
  // Linear interpolation of the crossing inside the last flight or day; used
  // as a smooth calibration objective.
  double fractional_cycles = 0.0;
  LimitingFactor limiting = LimitingFactor::threshold;
  double days = 0.0;
  double calendar_loss = 0.0;
  double cycle_loss = 0.0;
  double flight_dod = 0.0;  // nominal depth of one flight on a fresh battery
  BatteryState final_state;
};

// Fly, recharge at the profile C-rate, age one day every flights_per_day
// flights, until capacity drops below `threshold` or the mission (with
// reserve) no longer fits in a full battery. Throws InfeasibleError when the
// mission does not fit a fresh battery.
CycleLife cycles_to_threshold(const energy::VehicleSpec& spec, const AgingParams& aging,
                              const DutyProfile& profile, double threshold,
                              long max_flights = 1'000'000);

// Design mission of the spec at `payload`, flown reference_flights_per_day.
DutyProfile design_profile(const energy::VehicleSpec& spec, int payload);

}  // namespace uam::battery
