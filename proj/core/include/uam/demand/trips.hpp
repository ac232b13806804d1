#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "uam/demand/market.hpp"
#include "uam/random.hpp"
#include "uam/time.hpp"
#include "uam/vertidrome/network.hpp"

namespace uam::demand {

// Background share plus a morning and an evening Gaussian peak, in hours of
// the day.
struct DailyProfile {
  double base_share = 0.3;
  double am_peak_h = 8.0;
  double pm_peak_h = 17.5;
  double peak_sigma_h = 1.5;
  double am_share = 0.35;
  double pm_share = 0.35;
};

// A request given verbatim in a scenario, by vertidrome id.
struct ExplicitRequest {
  SimTime t_request = 0;
  std::string origin;
  std::string destination;
  int passengers = 1;
  double trip_km = 0.0;  // 0: the route distance
};

struct DemandConfig {
  bool generate = true;  // synthesize trips from the city profile
  CityProfile city;
  MarketParams market;
  DailyProfile profile;
  // P(group of 1), P(2), ...
  std::vector<double> group_size_probs{0.75, 0.2, 0.05};
  // Trip origins are drawn in the network bounding box grown by this margin.
  double region_margin_km = 5.0;
  // Departure window relative to the request time.
  double window_min_min = 10.0;
  double window_max_min = 40.0;
  std::vector<ExplicitRequest> requests;
};

DemandConfig demand_from_json(const nlohmann::json& node, const std::string& where = "demand");
nlohmann::json to_json(const DemandConfig& d);

struct TripRequest {
  std::uint64_t id = 0;
  SimTime t_request = 0;
  int origin = 0;
  int destination = 0;
  double trip_km = 0.0;  // door-to-door trip length
  int passengers = 1;
  SimTime t_min = 0;  // departure window
  SimTime t_max = 0;
};

// Relative arrival intensity at hour h in [0, 24), integrating to 1 over the day.
double profile_intensity(const DailyProfile& p, double hour);

// Expected trips per day that pass the minimum-length filter (before mapping
// onto vertidrome pairs).
double expected_daily_candidates(const DemandConfig& cfg);

// Arrivals for one day from a non-homogeneous Poisson process (thinning),
// each mapped to the nearest vertidromes of its origin and destination.
// Trips shorter than min_uam_km or mapping onto a single vertidrome are
// dropped. Sorted by time; ids start at first_id.
std::vector<TripRequest> trip_candidates(const DemandConfig& cfg, const vertidrome::Network& net, int day,
                                         Rng& rng, std::uint64_t first_id = 0);

}  // namespace uam::demand
