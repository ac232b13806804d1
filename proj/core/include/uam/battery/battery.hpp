#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "uam/energy/vehicle_spec.hpp"

namespace uam::battery {

// Replacement trigger: a fixed remaining-capacity fraction (0.80 standard,
// 0.75 extended) or "energy driven", i.e. only when the design mission no
// longer fits.
struct ReplaceThreshold {
  bool energy_driven = false;
  double fraction = 0.80;
};

// Empirical fade: 1 - alpha_cal * t^z_cal - beta(DOD) * Q^z_cyc with
// beta(DOD) = beta0 + beta1 * DOD, t in days and Q in full equivalent cycles
// of the nominal capacity.
struct AgingParams {
  double alpha_cal = 6.1e-4;
  double z_cal = 0.75;
  double beta0 = 0.0;
  double beta1 = 0.0139;
  double z_cyc = 0.5;
  double knee_fraction = 0.75;
  ReplaceThreshold replace;
  // Charging adds this many FEC per unit of charged capacity.
  double charge_throughput_weight = 0.5;
  double temperature_c = 26.0;

  double beta(double dod) const noexcept { return beta0 + beta1 * dod; }
};

void validate_aging(const AgingParams& p, const std::string& where = "aging");
AgingParams aging_from_json(const nlohmann::json& node, const std::string& where = "aging");
nlohmann::json to_json(const AgingParams& p);

struct BatteryState {
  double c0 = 1.0;
  double capacity_fraction = 1.0;
  double soc = 1.0;
  double age_days = 0.0;
  double throughput_fec = 0.0;  // nominal full equivalent cycles
  long flight_cycles = 0;
  double temperature_c = 26.0;
  // Sum of beta(dod_i)^(1/z_cyc) * q_i over throughput increments q_i with
  // nominal depth dod_i. Its z_cyc power is the cycle loss, which makes the
  // fade order independent and monotone in throughput.
  double stress_sum = 0.0;
  double weighted_dod_sum = 0.0;  // sum of dod_i * q_i
  bool beyond_model_validity = false;

  double available_energy() const noexcept { return soc * capacity_fraction * c0; }
};

BatteryState fresh_battery(double c0 = 1.0, double temperature_c = 26.0);

struct FlightStress {
  double dod = 0.0;  // drop in state of charge
  double duration_s = 0.0;
};

// Closed-form remaining capacity from total age, throughput and mean depth.
double capacity_closed_form(const AgingParams& p, double age_days, double throughput_fec,
                            double dod_avg);

double calendar_loss(const AgingParams& p, double age_days);
double cycle_loss(const AgingParams& p, const BatteryState& b);

// Throughput-weighted mean nominal depth of discharge, taken as the power mean
// implied by the stress sum so that capacity_closed_form(age, Q, dod_avg)
// reproduces the state's capacity. Falls back to the arithmetic mean when
// beta1 is zero.
double dod_avg(const AgingParams& p, const BatteryState& b);

BatteryState apply_flight(BatteryState b, const AgingParams& p, const FlightStress& stress);
BatteryState apply_calendar(BatteryState b, const AgingParams& p, double dt_days);

struct ChargeResult {
  BatteryState state;
  double duration_s = 0.0;
};

ChargeResult charge(BatteryState b, const AgingParams& p, double c_rate, double target_soc = 1.0);

enum class ReplacementDecision { keep, replace };

// Fraction below which the battery is replaced under the policy:
// max(threshold, design-mission requirement), or the requirement alone when
// energy driven.
double replacement_fraction(const AgingParams& p, const energy::VehicleSpec& spec);
ReplacementDecision replacement_policy(const BatteryState& b, const AgingParams& p,
                                       const energy::VehicleSpec& spec);

}  // namespace uam::battery
