#include "uam/demand/market.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "uam/error.hpp"
#include "uam/json_reader.hpp"

namespace uam::demand {
namespace {

GroundMode ground_from_json(const JsonReader& r, GroundMode g) {
  r.only_keys({"speed_kmh", "fixed_time_min", "cost_per_km", "fixed_cost"});
  g.speed_kmh = r.optional("speed_kmh", g.speed_kmh);
  g.fixed_time_min = r.optional("fixed_time_min", g.fixed_time_min);
  g.cost_per_km = r.optional("cost_per_km", g.cost_per_km);
  g.fixed_cost = r.optional("fixed_cost", g.fixed_cost);
  if (!(g.speed_kmh > 0.0)) r.fail("speed_kmh", "must be positive");
  if (g.fixed_time_min < 0.0 || g.cost_per_km < 0.0 || g.fixed_cost < 0.0)
    throw ConfigError(r.path(), "times and costs must be non-negative");
  return g;
}

nlohmann::json ground_json(const GroundMode& g) {
  return {{"speed_kmh", g.speed_kmh},
          {"fixed_time_min", g.fixed_time_min},
          {"cost_per_km", g.cost_per_km},
          {"fixed_cost", g.fixed_cost}};
}

}  // namespace

void validate_city(const CityProfile& c, const std::string& where) {
  if (c.name.empty()) throw ConfigError(where + ".name", "must be non-empty");
  if (!(c.population > 0.0)) throw ConfigError(where + ".population", "must be positive");
  if (!(c.area_km2 > 0.0)) throw ConfigError(where + ".area_km2", "must be positive");
  if (c.trip_rate < 0.0) throw ConfigError(where + ".trip_rate", "must be non-negative");
  if (c.gdp_per_capita < 0.0) throw ConfigError(where + ".gdp_per_capita", "must be non-negative");
  if (!(c.trip_length.median_km > 0.0)) throw ConfigError(where + ".trip_length.median_km", "must be positive");
  if (!(c.trip_length.sigma > 0.0)) throw ConfigError(where + ".trip_length.sigma", "must be positive");
  if (c.vertiport_density < 0.0) throw ConfigError(where + ".vertiport_density", "must be non-negative");
}

CityProfile city_from_json(const nlohmann::json& node, const std::string& where) {
  JsonReader r(node, where);
  r.only_keys({"name", "population", "gdp_per_capita", "area_km2", "trip_rate", "trip_length",
               "vertiport_density"});
  CityProfile c;
  c.name = r.required<std::string>("name");
  c.population = r.required<double>("population");
  c.gdp_per_capita = r.optional("gdp_per_capita", 0.0);
  c.area_km2 = r.required<double>("area_km2");
  c.trip_rate = r.required<double>("trip_rate");
  if (r.has("trip_length")) {
    auto t = r.object("trip_length");
    t.only_keys({"median_km", "sigma"});
    c.trip_length.median_km = t.required<double>("median_km");
    c.trip_length.sigma = t.required<double>("sigma");
  }
  c.vertiport_density = r.optional("vertiport_density", 0.0);
  validate_city(c, where);
  return c;
}

std::vector<CityProfile> cities_from_json(const nlohmann::json& node) {
  const nlohmann::json* list = &node;
  if (node.is_object()) {
    JsonReader r(node, "");
    r.only_keys({"cities"});
    if (!r.has("cities")) r.fail("cities", "missing required key");
    list = &node.at("cities");
  }
  if (!list->is_array()) throw ConfigError("cities", "expected an array");
  std::vector<CityProfile> out;
  for (std::size_t i = 0; i < list->size(); ++i)
    out.push_back(city_from_json((*list)[i], "cities[" + std::to_string(i) + "]"));
  return out;
}

nlohmann::json to_json(const CityProfile& c) {
  return {{"name", c.name},
          {"population", c.population},
          {"gdp_per_capita", c.gdp_per_capita},
          {"area_km2", c.area_km2},
          {"trip_rate", c.trip_rate},
          {"trip_length", {{"median_km", c.trip_length.median_km}, {"sigma", c.trip_length.sigma}}},
          {"vertiport_density", c.vertiport_density}};
}

MarketParams market_from_json(const nlohmann::json& node, const std::string& where) {
  JsonReader r(node, where);
  r.only_keys({"choice", "car", "transit", "k_access_min", "t_process_min", "uam_speed_kmh", "min_uam_km",
               "addressable_fraction", "viability_floor"});
  MarketParams m;
  if (r.has("choice")) m.choice = choice_from_json(r.raw().at("choice"), r.key_path("choice"));
  if (r.has("car")) m.car = ground_from_json(r.object("car"), m.car);
  if (r.has("transit")) m.transit = ground_from_json(r.object("transit"), m.transit);
  m.k_access_min = r.optional("k_access_min", m.k_access_min);
  m.t_process_min = r.optional("t_process_min", m.t_process_min);
  m.uam_speed_kmh = r.optional("uam_speed_kmh", m.uam_speed_kmh);
  m.min_uam_km = r.optional("min_uam_km", m.min_uam_km);
  m.addressable_fraction = r.optional("addressable_fraction", m.addressable_fraction);
  m.viability_floor = r.optional("viability_floor", m.viability_floor);
  if (m.k_access_min < 0.0) r.fail("k_access_min", "must be non-negative");
  if (m.t_process_min < 0.0) r.fail("t_process_min", "must be non-negative");
  if (!(m.uam_speed_kmh > 0.0)) r.fail("uam_speed_kmh", "must be positive");
  if (m.min_uam_km < 0.0) r.fail("min_uam_km", "must be non-negative");
  if (m.addressable_fraction < 0.0 || m.addressable_fraction > 1.0)
    r.fail("addressable_fraction", "must be in [0, 1]");
  if (m.viability_floor < 0.0) r.fail("viability_floor", "must be non-negative");
  return m;
}

nlohmann::json to_json(const MarketParams& m) {
  return {{"choice", to_json(m.choice)},
          {"car", ground_json(m.car)},
          {"transit", ground_json(m.transit)},
          {"k_access_min", m.k_access_min},
          {"t_process_min", m.t_process_min},
          {"uam_speed_kmh", m.uam_speed_kmh},
          {"min_uam_km", m.min_uam_km},
          {"addressable_fraction", m.addressable_fraction},
          {"viability_floor", m.viability_floor}};
}

double access_leg(double density, const MarketParams& m) {
  if (!(density > 0.0)) throw DomainError("vertiport density must be positive");
  return m.k_access_min / std::sqrt(density);
}

double access_time(double density, const MarketParams& m) {
  return access_leg(density, m) + m.t_process_min;
}

ModeAlternative ground_alternative(Mode mode, double d, const MarketParams& m) {
  const GroundMode& g = mode == Mode::car ? m.car : m.transit;
  return {mode, g.fixed_time_min + d / g.speed_kmh * 60.0, g.fixed_cost + g.cost_per_km * d};
}

ModeOffer trip_offer(double d, double price_per_km, double density, const MarketParams& m) {
  const double uam_time = access_time(density, m) + d / m.uam_speed_kmh * 60.0 + access_leg(density, m);
  return {{Mode::uam, uam_time, price_per_km * d},
          ground_alternative(Mode::car, d, m),
          ground_alternative(Mode::transit, d, m)};
}

double lognormal_pdf(double x, const TripLengthDistribution& t) {
  if (x <= 0.0) return 0.0;
  const double z = (std::log(x) - std::log(t.median_km)) / t.sigma;
  return std::exp(-0.5 * z * z) / (x * t.sigma * std::sqrt(2.0 * std::numbers::pi));
}

double city_uam_demand(const CityProfile& city, double price_per_km, double density, const MarketParams& m) {
  if (!(price_per_km > 0.0)) throw DomainError("price per km must be positive");
  if (!(density > 0.0)) throw DomainError("vertiport density must be positive");
  const double trips = city.population * city.trip_rate * m.addressable_fraction;
  if (trips <= 0.0) return 0.0;
  auto integrand = [&](double d) {
    return mode_probabilities(trip_offer(d, price_per_km, density, m), m.choice)[0] *
           lognormal_pdf(d, city.trip_length);
  };
  const double lo = std::max(m.min_uam_km, 1e-9);
  // The lognormal tail beyond 8 sigma carries < 1e-15 of the mass.
  const double hi = std::max(lo * 2.0, city.trip_length.median_km * std::exp(8.0 * city.trip_length.sigma));
  const double share = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, lo, hi, 15, 1e-10);
  return trips * share;
}

ScanResult global_scan(const std::vector<CityProfile>& cities, const ScanGrid& grid, const MarketParams& m) {
  ScanResult out;
  out.grid = grid;
  const auto np = grid.prices_per_km.size();
  const auto nd = grid.densities.size();
  out.totals.assign(np, std::vector<double>(nd, 0.0));
  out.qualifying.assign(np, std::vector<int>(nd, 0));
  for (const auto& city : cities)
    for (std::size_t p = 0; p < np; ++p)
      for (std::size_t d = 0; d < nd; ++d) {
        ScanCell c;
        c.city = city.name;
        c.price_index = p;
        c.density_index = d;
        c.daily_uam_trips = city_uam_demand(city, grid.prices_per_km[p], grid.densities[d], m);
        c.qualifies = c.daily_uam_trips >= m.viability_floor;
        out.totals[p][d] += c.daily_uam_trips;
        out.qualifying[p][d] += c.qualifies ? 1 : 0;
        out.cells.push_back(c);
      }
  double best = -1.0;
  for (std::size_t p = 0; p < np; ++p)
    for (std::size_t d = 0; d < nd; ++d)
      if (out.totals[p][d] > best) {
        best = out.totals[p][d];
        out.best_price = p;
        out.best_density = d;
      }
  return out;
}

std::vector<std::string> monotonicity_violations(const ScanResult& r) {
  std::vector<std::string> out;
  const std::size_t np = r.grid.prices_per_km.size();
  const std::size_t nd = r.grid.densities.size();
  std::map<std::string, std::vector<std::vector<double>>> by_city;
  for (const auto& c : r.cells) {
    auto& g = by_city[c.city];
    if (g.empty()) g.assign(np, std::vector<double>(nd, 0.0));
    g[c.price_index][c.density_index] = c.daily_uam_trips;
  }
  for (const auto& [city, g] : by_city) {
    for (std::size_t p = 0; p < np; ++p)
      for (std::size_t d = 0; d < nd; ++d) {
        if (p + 1 < np && g[p + 1][d] > g[p][d])
          out.push_back(city + ": demand rises with price at density index " + std::to_string(d));
        if (d + 1 < nd && g[p][d + 1] < g[p][d])
          out.push_back(city + ": demand falls with density at price index " + std::to_string(p));
        if (g[p][d] > g[0][nd - 1]) out.push_back(city + ": favorable corner not maximal");
      }
  }
  return out;
}

}  // namespace uam::demand
