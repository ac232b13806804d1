#include "uam/econ/cost_model.hpp"

#include <algorithm>
#include <cmath>

#include "uam/battery/cycle_life.hpp"
#include "uam/error.hpp"
#include "uam/json_reader.hpp"

namespace uam::econ {

void validate_costs(const CostParams& p, const std::string& where) {
  auto non_negative = [&](double v, const char* key) {
    if (!(v >= 0.0)) throw ConfigError(where + "." + key, "must be non-negative");
  };
  non_negative(p.electricity_price, "electricity_price");
  non_negative(p.battery_cost_per_kwh, "battery_cost_per_kwh");
  non_negative(p.maintenance_per_fh, "maintenance_per_fh");
  non_negative(p.crew_per_fh, "crew_per_fh");
  non_negative(p.vehicle_price, "vehicle_price");
  non_negative(p.insurance_rate, "insurance_rate");
  non_negative(p.landing_fee, "landing_fee");
  non_negative(p.margin, "margin");
  non_negative(p.block_adder_h, "block_adder_h");
  if (!(p.depreciation_years > 0.0)) throw ConfigError(where + ".depreciation_years", "must be positive");
  if (!(p.annual_utilization_fh > 0.0)) throw ConfigError(where + ".annual_utilization_fh", "must be positive");
  if (!(p.indirect_share >= 0.0 && p.indirect_share < 1.0))
    throw ConfigError(where + ".indirect_share", "must be in [0, 1)");
}

CostParams costs_from_json(const nlohmann::json& node, CostParams p, const std::string& where) {
  JsonReader r(node, where);
  r.only_keys({"electricity_price", "battery_cost_per_kwh", "maintenance_per_fh", "crew_per_fh", "vehicle_price",
               "depreciation_years", "annual_utilization_fh", "insurance_rate", "landing_fee", "indirect_share",
               "margin", "block_adder_h"});
  p.electricity_price = r.optional("electricity_price", p.electricity_price);
  p.battery_cost_per_kwh = r.optional("battery_cost_per_kwh", p.battery_cost_per_kwh);
  p.maintenance_per_fh = r.optional("maintenance_per_fh", p.maintenance_per_fh);
  p.crew_per_fh = r.optional("crew_per_fh", p.crew_per_fh);
  p.vehicle_price = r.optional("vehicle_price", p.vehicle_price);
  p.depreciation_years = r.optional("depreciation_years", p.depreciation_years);
  p.annual_utilization_fh = r.optional("annual_utilization_fh", p.annual_utilization_fh);
  p.insurance_rate = r.optional("insurance_rate", p.insurance_rate);
  p.landing_fee = r.optional("landing_fee", p.landing_fee);
  p.indirect_share = r.optional("indirect_share", p.indirect_share);
  p.margin = r.optional("margin", p.margin);
  p.block_adder_h = r.optional("block_adder_h", p.block_adder_h);
  validate_costs(p, where);
  return p;
}

nlohmann::json to_json(const CostParams& p) {
  return {{"electricity_price", p.electricity_price},
          {"battery_cost_per_kwh", p.battery_cost_per_kwh},
          {"maintenance_per_fh", p.maintenance_per_fh},
          {"crew_per_fh", p.crew_per_fh},
          {"vehicle_price", p.vehicle_price},
          {"depreciation_years", p.depreciation_years},
          {"annual_utilization_fh", p.annual_utilization_fh},
          {"insurance_rate", p.insurance_rate},
          {"landing_fee", p.landing_fee},
          {"indirect_share", p.indirect_share},
          {"margin", p.margin},
          {"block_adder_h", p.block_adder_h}};
}

double block_hours(const energy::VehicleSpec& spec, const energy::Mission& mission, const CostParams& p) {
  return mission.total_distance_km() / spec.cruise_speed_kmh +
         p.block_adder_h * static_cast<double>(mission.legs.size());
}

CostBreakdown flight_cost(const energy::VehicleSpec& spec, const energy::Mission& mission, double cycle_life,
                          const CostParams& p, bool piloted) {
  if (!(cycle_life > 0.0)) throw DomainError("cycle life must be positive");
  if (mission.legs.empty() || !(mission.total_distance_km() > 0.0))
    throw DomainError("flight cost needs a positive distance");
  energy::Mission flown = mission;
  flown.reserve_included = false;
  CostBreakdown b;
  b.distance_km = mission.total_distance_km();
  b.block_hours = block_hours(spec, mission, p);
  b.energy = energy::mission_energy(spec, flown) * spec.battery_kwh * p.electricity_price;
  b.battery_depreciation = spec.battery_kwh * p.battery_cost_per_kwh / cycle_life;
  b.maintenance = p.maintenance_per_fh * b.block_hours;
  b.crew = piloted ? p.crew_per_fh * b.block_hours : 0.0;
  b.capital = p.vehicle_price / (p.depreciation_years * p.annual_utilization_fh) * b.block_hours;
  b.insurance = p.insurance_rate * p.vehicle_price / p.annual_utilization_fh * b.block_hours;
  b.fees = static_cast<double>(mission.legs.size()) * p.landing_fee;
  b.indirect = p.indirect_share / (1.0 - p.indirect_share) * b.direct();
  b.total = b.direct() + b.indirect;
  return b;
}

double fare_per_seat(const CostBreakdown& b, double margin, int seats_sold) {
  if (seats_sold < 1) throw DomainError("seats sold must be at least 1");
  return b.total * (1.0 + margin) / seats_sold;
}

double fare_per_km(const CostBreakdown& b, double margin, int seats_sold, double distance_km) {
  if (!(distance_km > 0.0)) throw DomainError("distance must be positive");
  return fare_per_seat(b, margin, seats_sold) / distance_km;
}

int passenger_seats(const energy::VehicleSpec& spec, bool piloted) {
  return std::max(0, spec.seats - (piloted ? 1 : 0));
}

double planning_cycle_life(const energy::VehicleSpec& spec, const energy::Mission& mission,
                           const battery::AgingParams& aging, const CostParams& p) {
  battery::DutyProfile profile;
  profile.mission = mission;
  profile.mission.reserve_included = true;
  const double per_day = p.annual_utilization_fh / 365.0 / block_hours(spec, mission, p);
  profile.flights_per_day = std::max(1, static_cast<int>(std::lround(per_day)));
  const double threshold = std::max(battery::replacement_fraction(aging, spec), aging.knee_fraction);
  const auto life = battery::cycles_to_threshold(spec, aging, profile, threshold);
  return std::max(1.0, life.fractional_cycles);
}

CostParams CostBook::params(const std::string& set, const std::string& spec_id) const {
  auto it = base.find(set);
  if (it == base.end()) throw ConfigError("costs." + set, "unknown cost parameter set");
  CostParams p = it->second;
  auto ov = per_spec.find(set);
  if (ov != per_spec.end()) {
    auto s = ov->second.find(spec_id);
    if (s != ov->second.end()) p = costs_from_json(s->second, p, "costs." + set + ".per_spec." + spec_id);
  }
  return p;
}

std::vector<std::string> CostBook::sets() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : base) out.push_back(k);
  return out;
}

CostBook cost_book_from_json(const nlohmann::json& node, const std::string& where) {
  JsonReader r(node, where);
  r.only_keys({"label", "sets", "use_cases"});
  CostBook book;
  book.label = r.optional<std::string>("label", "");
  auto sets = r.object("sets");
  for (const auto& item : sets.raw().items()) {
    const std::string path = sets.key_path(item.key());
    JsonReader s(item.value(), path);
    s.only_keys({"base", "per_spec"});
    book.base[item.key()] = costs_from_json(s.raw().at("base"), CostParams{}, path + ".base");
    if (s.has("per_spec")) {
      auto ps = s.object("per_spec");
      for (const auto& o : ps.raw().items()) {
        // Validate now so that errors carry the file path.
        costs_from_json(o.value(), book.base[item.key()], ps.key_path(o.key()));
        book.per_spec[item.key()][o.key()] = o.value();
      }
    }
  }
  if (book.base.empty()) sets.fail("", "at least one parameter set required");
  for (const auto& u : r.objects("use_cases")) {
    u.only_keys({"name", "spec", "distance_km", "legs", "piloted", "fare_min", "fare_max"});
    UseCase uc;
    uc.name = u.required<std::string>("name");
    uc.spec = u.required<std::string>("spec");
    uc.distance_km = u.required<double>("distance_km");
    uc.legs = u.optional("legs", 1);
    uc.piloted = u.optional("piloted", false);
    uc.fare_min = u.optional("fare_min", 0.0);
    uc.fare_max = u.optional("fare_max", 0.0);
    if (!(uc.distance_km > 0.0)) u.fail("distance_km", "must be positive");
    if (uc.legs < 1) u.fail("legs", "must be at least 1");
    book.use_cases.push_back(uc);
  }
  return book;
}

nlohmann::json to_json(const CostBook& book) {
  nlohmann::json sets = nlohmann::json::object();
  for (const auto& [name, p] : book.base) {
    nlohmann::json s{{"base", to_json(p)}};
    auto ov = book.per_spec.find(name);
    if (ov != book.per_spec.end()) {
      s["per_spec"] = nlohmann::json::object();
      for (const auto& [spec, j] : ov->second) s["per_spec"][spec] = j;
    }
    sets[name] = s;
  }
  auto ucs = nlohmann::json::array();
  for (const auto& u : book.use_cases)
    ucs.push_back({{"name", u.name},
                   {"spec", u.spec},
                   {"distance_km", u.distance_km},
                   {"legs", u.legs},
                   {"piloted", u.piloted},
                   {"fare_min", u.fare_min},
                   {"fare_max", u.fare_max}});
  return {{"label", book.label}, {"sets", sets}, {"use_cases", ucs}};
}

UseCaseFare evaluate_use_case(const UseCase& uc, const std::string& set, const CostBook& book,
                              const energy::VehicleSpec& spec, const battery::AgingParams& aging) {
  UseCaseFare out;
  out.use_case = uc.name;
  out.set = set;
  const CostParams p = book.params(set, spec.id);
  energy::Mission m;
  for (int i = 0; i < uc.legs; ++i) m.legs.push_back({"", "", uc.distance_km / uc.legs});
  m.payload = spec.max_payload_persons;
  out.seats_sold = passenger_seats(spec, uc.piloted);
  out.cycle_life = planning_cycle_life(spec, m, aging, p);
  out.breakdown = flight_cost(spec, m, out.cycle_life, p, uc.piloted);
  out.fare_per_seat = fare_per_seat(out.breakdown, p.margin, out.seats_sold);
  out.fare_per_km = fare_per_km(out.breakdown, p.margin, out.seats_sold, uc.distance_km);
  return out;
}

OperatorPnl operator_pnl(const std::vector<FlightEconomics>& flights) {
  OperatorPnl pnl;
  for (const auto& f : flights) {
    pnl.revenue += f.revenue;
    pnl.cost += f.cost;
    ++pnl.flights;
    if (f.reposition) {
      ++pnl.reposition_flights;
      continue;
    }
    auto& s = pnl.by_use_case[f.use_case];
    ++s.flights;
    s.revenue += f.revenue;
    s.seat_km += f.distance_km * f.seats_sold;
  }
  for (auto& [k, s] : pnl.by_use_case) s.mean_fare_per_km = s.seat_km > 0.0 ? s.revenue / s.seat_km : 0.0;
  pnl.profit = pnl.revenue - pnl.cost;
  pnl.realized_margin = pnl.cost > 0.0 ? pnl.profit / pnl.cost : 0.0;
  return pnl;
}

}  // namespace uam::econ
