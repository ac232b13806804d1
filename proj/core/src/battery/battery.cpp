#include "uam/battery/battery.hpp"

#include <algorithm>
#include <cmath>

#include "uam/energy/energy_model.hpp"
#include "uam/error.hpp"
#include "uam/json_reader.hpp"

namespace uam::battery {
namespace {

// The default exponents hit exact fast paths; results equal std::pow to
// within rounding.
double power(double x, double e) {
  if (e == 0.5) return std::sqrt(x);
  if (e == 2.0) return x * x;
  if (e == 0.75) {
    const double r = std::sqrt(x);
    return r * std::sqrt(r);
  }
  return std::pow(x, e);
}

void add_throughput(BatteryState& b, const AgingParams& p, double q, double depth) {
  if (q <= 0.0) return;
  b.throughput_fec += q;
  b.weighted_dod_sum += depth * q;
  b.stress_sum += power(p.beta(depth), 1.0 / p.z_cyc) * q;
}

void refresh_capacity(BatteryState& b, const AgingParams& p) {
  const double fraction = 1.0 - calendar_loss(p, b.age_days) - cycle_loss(p, b);
  b.capacity_fraction = std::min(b.capacity_fraction, fraction);
  if (b.capacity_fraction < p.knee_fraction) b.beyond_model_validity = true;
}

}  // namespace

void validate_aging(const AgingParams& p, const std::string& where) {
  auto require = [&](bool ok, const char* key, const char* msg) {
    if (!ok) throw ConfigError(where + "." + key, msg);
  };
  require(p.alpha_cal >= 0.0, "alpha_cal", "must be non-negative");
  require(p.z_cal > 0.0, "z_cal", "must be positive");
  require(p.beta0 >= 0.0, "beta0", "must be non-negative");
  require(p.beta1 >= 0.0, "beta1", "must be non-negative");
  require(p.z_cyc > 0.0 && p.z_cyc <= 1.0, "z_cyc", "must be in (0, 1]");
  require(p.knee_fraction > 0.0 && p.knee_fraction < 1.0, "knee_fraction", "must be in (0, 1)");
  if (!p.replace.energy_driven)
    require(p.replace.fraction >= p.knee_fraction && p.replace.fraction <= 1.0, "replace_threshold",
            "must be in [knee_fraction, 1]");
  require(p.charge_throughput_weight >= 0.0, "charge_throughput_weight", "must be non-negative");
}

AgingParams aging_from_json(const nlohmann::json& node, const std::string& where) {
  JsonReader r(node, where);
  r.only_keys({"alpha_cal", "z_cal", "beta0", "beta1", "z_cyc", "knee_fraction", "replace_threshold",
               "charge_throughput_weight", "temperature_c"});
  AgingParams p;
  p.alpha_cal = r.optional("alpha_cal", p.alpha_cal);
  p.z_cal = r.optional("z_cal", p.z_cal);
  p.beta0 = r.optional("beta0", p.beta0);
  p.beta1 = r.optional("beta1", p.beta1);
  p.z_cyc = r.optional("z_cyc", p.z_cyc);
  p.knee_fraction = r.optional("knee_fraction", p.knee_fraction);
  p.charge_throughput_weight = r.optional("charge_throughput_weight", p.charge_throughput_weight);
  p.temperature_c = r.optional("temperature_c", p.temperature_c);
  if (r.has("replace_threshold")) {
    const auto& v = r.raw().at("replace_threshold");
    if (v.is_string()) {
      if (v.get<std::string>() != "energy")
        r.fail("replace_threshold", "expected a fraction or \"energy\"");
      p.replace.energy_driven = true;
    } else {
      p.replace.fraction = JsonReader::convert<double>(v, r.key_path("replace_threshold"));
    }
  }
  if (p.temperature_c != 26.0) r.fail("temperature_c", "only the 26 degC isothermal model is available");
  validate_aging(p, where);
  return p;
}

nlohmann::json to_json(const AgingParams& p) {
  nlohmann::json j{
      {"alpha_cal", p.alpha_cal},
      {"z_cal", p.z_cal},
      {"beta0", p.beta0},
      {"beta1", p.beta1},
      {"z_cyc", p.z_cyc},
      {"knee_fraction", p.knee_fraction},
      {"charge_throughput_weight", p.charge_throughput_weight},
      {"temperature_c", p.temperature_c},
  };
  if (p.replace.energy_driven) j["replace_threshold"] = "energy";
  else j["replace_threshold"] = p.replace.fraction;
  return j;
}

BatteryState fresh_battery(double c0, double temperature_c) {
  BatteryState b;
  b.c0 = c0;
  b.temperature_c = temperature_c;
  return b;
}

double calendar_loss(const AgingParams& p, double age_days) {
  return age_days > 0.0 ? p.alpha_cal * power(age_days, p.z_cal) : 0.0;
}

double cycle_loss(const AgingParams& p, const BatteryState& b) {
  return b.stress_sum > 0.0 ? power(b.stress_sum, p.z_cyc) : 0.0;
}

double capacity_closed_form(const AgingParams& p, double age_days, double throughput_fec,
                            double mean_dod) {
  const double cyc = throughput_fec > 0.0 ? p.beta(mean_dod) * power(throughput_fec, p.z_cyc) : 0.0;
  return 1.0 - calendar_loss(p, age_days) - cyc;
}

double dod_avg(const AgingParams& p, const BatteryState& b) {
  if (b.throughput_fec <= 0.0) return 0.0;
  if (p.beta1 <= 0.0) return b.weighted_dod_sum / b.throughput_fec;
  const double beta_eff = power(b.stress_sum / b.throughput_fec, p.z_cyc);
  return (beta_eff - p.beta0) / p.beta1;
}

BatteryState apply_flight(BatteryState b, const AgingParams& p, const FlightStress& stress) {
  if (!(stress.dod > 0.0)) throw DomainError("flight depth of discharge must be positive");
  if (stress.dod > b.soc + 1e-12) throw DomainError("flight depth of discharge exceeds state of charge");
  if (b.beyond_model_validity)
    throw InfeasibleError("battery beyond model validity (rapid capacity fade); flight rejected");
  const double depth = stress.dod * b.capacity_fraction;
  add_throughput(b, p, depth, depth);
  b.soc = std::max(0.0, b.soc - stress.dod);
  b.flight_cycles += 1;
  refresh_capacity(b, p);
  return b;
}

BatteryState apply_calendar(BatteryState b, const AgingParams& p, double dt_days) {
  if (dt_days < 0.0) throw DomainError("calendar step must be non-negative");
  if (dt_days == 0.0) return b;
  b.age_days += dt_days;
  refresh_capacity(b, p);
  return b;
}

ChargeResult charge(BatteryState b, const AgingParams& p, double c_rate, double target_soc) {
  if (!(c_rate > 0.0)) throw DomainError("charge C-rate must be positive");
  if (target_soc > 1.0) throw DomainError("target state of charge above 1");
  if (target_soc < b.soc) throw DomainError("target state of charge below current");
  const double delta = target_soc - b.soc;
  ChargeResult out;
  out.duration_s = delta * 3600.0 / c_rate;
  const double depth = delta * b.capacity_fraction;
  add_throughput(b, p, p.charge_throughput_weight * depth, depth);
  b.soc = target_soc;
  refresh_capacity(b, p);
  out.state = b;
  return out;
}

double replacement_fraction(const AgingParams& p, const energy::VehicleSpec& spec) {
  const double need = energy::mission_energy(spec, energy::design_mission(spec, spec.max_payload_persons)) /
                      spec.capacity_nominal;
  return p.replace.energy_driven ? need : std::max(p.replace.fraction, need);
}

ReplacementDecision replacement_policy(const BatteryState& b, const AgingParams& p,
                                       const energy::VehicleSpec& spec) {
  if (b.beyond_model_validity) return ReplacementDecision::replace;
  return b.capacity_fraction < replacement_fraction(p, spec) ? ReplacementDecision::replace
                                                             : ReplacementDecision::keep;
}

}  // namespace uam::battery
