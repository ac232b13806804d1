#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "uam/battery/battery.hpp"
#include "uam/energy/energy_model.hpp"

namespace uam::econ {

struct CostParams {
  double electricity_price = 0.25;  // per kWh
  double battery_cost_per_kwh = 500.0;
  double maintenance_per_fh = 250.0;
  double crew_per_fh = 120.0;  // charged only when piloted
  double vehicle_price = 2.0e6;
  double depreciation_years = 10.0;
  double annual_utilization_fh = 3000.0;
  double insurance_rate = 0.04;  // of vehicle price per year
  double landing_fee = 40.0;
  double indirect_share = 0.30;  // of total cost
  double margin = 0.10;
  double block_adder_h = 0.1;  // taxi and turn time per leg
};

void validate_costs(const CostParams& p, const std::string& where = "costs");
// Applies the keys present in `node` on top of `base`.
CostParams costs_from_json(const nlohmann::json& node, CostParams base, const std::string& where);
nlohmann::json to_json(const CostParams& p);

struct CostBreakdown {
  double energy = 0.0;
  double battery_depreciation = 0.0;
  double maintenance = 0.0;
  double crew = 0.0;
  double capital = 0.0;
  double insurance = 0.0;
  double fees = 0.0;
  double indirect = 0.0;
  double total = 0.0;
  double block_hours = 0.0;
  double distance_km = 0.0;

  double direct() const noexcept {
    return energy + battery_depreciation + maintenance + crew + capital + insurance + fees;
  }
};

double block_hours(const energy::VehicleSpec& spec, const energy::Mission& mission, const CostParams& p);

// Per-flight cost of flying `mission` (reserve carried, not consumed).
// cycle_life must be positive.
CostBreakdown flight_cost(const energy::VehicleSpec& spec, const energy::Mission& mission, double cycle_life,
                          const CostParams& p, bool piloted);

double fare_per_km(const CostBreakdown& b, double margin, int seats_sold, double distance_km);
double fare_per_seat(const CostBreakdown& b, double margin, int seats_sold);

// Seats available to passengers.
int passenger_seats(const energy::VehicleSpec& spec, bool piloted);

// Battery life in flights for costing: the mission at full load flown at the
// rate implied by annual utilization, until the replacement threshold.
double planning_cycle_life(const energy::VehicleSpec& spec, const energy::Mission& mission,
                           const battery::AgingParams& aging, const CostParams& p);

struct UseCase {
  std::string name;
  std::string spec;
  double distance_km = 0.0;
  int legs = 1;
  bool piloted = false;
  double fare_min = 0.0;  // reference band per km
  double fare_max = 0.0;
};

// Cost file: named parameter sets (each a base plus per-spec overrides) and
// use-case presets.
struct CostBook {
  std::string label;
  std::map<std::string, CostParams> base;
  std::map<std::string, std::map<std::string, nlohmann::json>> per_spec;
  std::vector<UseCase> use_cases;

  CostParams params(const std::string& set, const std::string& spec_id) const;
  std::vector<std::string> sets() const;
};

CostBook cost_book_from_json(const nlohmann::json& node, const std::string& where = "costs");
nlohmann::json to_json(const CostBook& book);

struct UseCaseFare {
  std::string use_case;
  std::string set;
  CostBreakdown breakdown;
  double cycle_life = 0.0;
  int seats_sold = 0;
  double fare_per_km = 0.0;
  double fare_per_seat = 0.0;
};

UseCaseFare evaluate_use_case(const UseCase& uc, const std::string& set, const CostBook& book,
                              const energy::VehicleSpec& spec, const battery::AgingParams& aging);

struct FlightEconomics {
  std::string use_case;
  double distance_km = 0.0;
  int seats_sold = 0;
  double cost = 0.0;
  double revenue = 0.0;
  bool reposition = false;
};

struct UseCaseStats {
  std::size_t flights = 0;
  double mean_fare_per_km = 0.0;  // revenue per seat-km sold
  double seat_km = 0.0;
  double revenue = 0.0;
};

struct OperatorPnl {
  double revenue = 0.0;
  double cost = 0.0;
  double profit = 0.0;
  double realized_margin = 0.0;  // profit / cost
  std::size_t flights = 0;
  std::size_t reposition_flights = 0;
  std::map<std::string, UseCaseStats> by_use_case;
};

OperatorPnl operator_pnl(const std::vector<FlightEconomics>& flights);

}  // namespace uam::econ
