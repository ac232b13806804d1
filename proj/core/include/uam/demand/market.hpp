#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "uam/demand/choice.hpp"

namespace uam::demand {

struct TripLengthDistribution {
  double median_km = 8.0;
  double sigma = 0.8;  // of log distance
};

struct CityProfile {
  std::string name;
  double population = 0.0;
  double gdp_per_capita = 0.0;
  double area_km2 = 0.0;
  double trip_rate = 0.0;  // motorized trips per person and day
  TripLengthDistribution trip_length;
  double vertiport_density = 0.0;  // per 100 km2
};

struct GroundMode {
  double speed_kmh = 30.0;
  double fixed_time_min = 0.0;
  double cost_per_km = 0.0;
  double fixed_cost = 0.0;
};

struct MarketParams {
  ChoiceParams choice;
  GroundMode car{30.0, 5.0, 0.30, 0.0};
  GroundMode transit{20.0, 10.0, 0.10, 2.0};
  double k_access_min = 21.2;  // access leg at density 1 per 100 km2
  double t_process_min = 10.0;
  double uam_speed_kmh = 120.0;
  double min_uam_km = 5.0;
  // Share of trips whose travellers would consider an air taxi at all.
  double addressable_fraction = 1.0;
  double viability_floor = 1000.0;  // daily trips for a city to qualify
};

void validate_city(const CityProfile& c, const std::string& where = "city");
CityProfile city_from_json(const nlohmann::json& node, const std::string& where = "city");
std::vector<CityProfile> cities_from_json(const nlohmann::json& node);
nlohmann::json to_json(const CityProfile& c);

MarketParams market_from_json(const nlohmann::json& node, const std::string& where = "market");
nlohmann::json to_json(const MarketParams& m);

// Access leg plus processing, minutes. Throws DomainError for density <= 0.
double access_time(double density, const MarketParams& m);
// One-way access leg alone (also used for egress).
double access_leg(double density, const MarketParams& m);

ModeAlternative ground_alternative(Mode mode, double distance_km, const MarketParams& m);

// Full offer for a trip: uam at price_per_km (access, processing, flight,
// egress), car and transit.
ModeOffer trip_offer(double distance_km, double price_per_km, double density, const MarketParams& m);

double lognormal_pdf(double x, const TripLengthDistribution& t);

// Expected daily UAM trips: trips/day times the integral of P_uam over the
// trip-length density from min_uam_km upward.
double city_uam_demand(const CityProfile& city, double price_per_km, double density, const MarketParams& m);

struct ScanGrid {
  std::vector<double> prices_per_km{2.0, 6.0};  // ordered low to high
  std::vector<double> densities{1.0, 4.0};      // ordered low to high
};

struct ScanCell {
  std::string city;
  std::size_t price_index = 0;
  std::size_t density_index = 0;
  double daily_uam_trips = 0.0;
  bool qualifies = false;
};

struct ScanResult {
  ScanGrid grid;
  std::vector<ScanCell> cells;
  std::vector<std::vector<double>> totals;       // [price][density]
  std::vector<std::vector<int>> qualifying;      // [price][density]
  std::size_t best_price = 0;
  std::size_t best_density = 0;
};

ScanResult global_scan(const std::vector<CityProfile>& cities, const ScanGrid& grid, const MarketParams& m);

// Per city: demand non-increasing in price, non-decreasing in density, and the
// low-price/high-density corner maximal. Empty when all hold.
std::vector<std::string> monotonicity_violations(const ScanResult& r);

}  // namespace uam::demand
