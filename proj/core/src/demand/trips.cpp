#include "uam/demand/trips.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/random/exponential_distribution.hpp>
#include <boost/random/lognormal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "uam/demand/choice.hpp"
#include "uam/error.hpp"
#include "uam/json_reader.hpp"

namespace uam::demand {
namespace {

double gauss(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

double raw_intensity(const DailyProfile& p, double h) {
  return p.base_share / 24.0 + p.am_share * gauss(h, p.am_peak_h, p.peak_sigma_h) +
         p.pm_share * gauss(h, p.pm_peak_h, p.peak_sigma_h);
}

double normalizer(const DailyProfile& p) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double h) { return raw_intensity(p, h); }, 0.0, 24.0, 10, 1e-12);
}

double share_above(const TripLengthDistribution& t, double km) {
  if (km <= 0.0) return 1.0;
  const double z = (std::log(km) - std::log(t.median_km)) / t.sigma;
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

}  // namespace

DemandConfig demand_from_json(const nlohmann::json& node, const std::string& where) {
  JsonReader r(node, where);
  r.only_keys({"generate", "city", "market", "profile", "group_size_probs", "region_margin_km", "window_min_min",
               "window_max_min", "requests"});
  DemandConfig d;
  d.generate = r.optional("generate", d.generate);
  if (r.has("city")) d.city = city_from_json(r.raw().at("city"), r.key_path("city"));
  else if (d.generate) r.fail("city", "required when generate is true");
  if (r.has("market")) d.market = market_from_json(r.raw().at("market"), r.key_path("market"));
  if (r.has("profile")) {
    auto p = r.object("profile");
    p.only_keys({"base_share", "am_peak_h", "pm_peak_h", "peak_sigma_h", "am_share", "pm_share"});
    d.profile.base_share = p.optional("base_share", d.profile.base_share);
    d.profile.am_peak_h = p.optional("am_peak_h", d.profile.am_peak_h);
    d.profile.pm_peak_h = p.optional("pm_peak_h", d.profile.pm_peak_h);
    d.profile.peak_sigma_h = p.optional("peak_sigma_h", d.profile.peak_sigma_h);
    d.profile.am_share = p.optional("am_share", d.profile.am_share);
    d.profile.pm_share = p.optional("pm_share", d.profile.pm_share);
    if (d.profile.base_share < 0.0 || d.profile.am_share < 0.0 || d.profile.pm_share < 0.0)
      throw ConfigError(p.path(), "shares must be non-negative");
    if (d.profile.base_share + d.profile.am_share + d.profile.pm_share <= 0.0)
      throw ConfigError(p.path(), "shares must not all be zero");
    if (!(d.profile.peak_sigma_h > 0.0)) p.fail("peak_sigma_h", "must be positive");
  }
  d.group_size_probs = r.optional("group_size_probs", d.group_size_probs);
  double sum = 0.0;
  for (double g : d.group_size_probs) {
    if (g < 0.0) r.fail("group_size_probs", "probabilities must be non-negative");
    sum += g;
  }
  if (d.group_size_probs.empty() || std::abs(sum - 1.0) > 1e-9)
    r.fail("group_size_probs", "must be non-empty and sum to 1");
  d.region_margin_km = r.optional("region_margin_km", d.region_margin_km);
  d.window_min_min = r.optional("window_min_min", d.window_min_min);
  d.window_max_min = r.optional("window_max_min", d.window_max_min);
  if (d.region_margin_km < 0.0) r.fail("region_margin_km", "must be non-negative");
  if (d.window_min_min < 0.0) r.fail("window_min_min", "must be non-negative");
  if (!(d.window_max_min > d.window_min_min)) r.fail("window_max_min", "must exceed window_min_min");
  for (const auto& q : r.objects("requests")) {
    q.only_keys({"t_request", "origin", "destination", "passengers", "trip_km"});
    ExplicitRequest e;
    e.t_request = q.required<SimTime>("t_request");
    e.origin = q.required<std::string>("origin");
    e.destination = q.required<std::string>("destination");
    e.passengers = q.optional("passengers", 1);
    e.trip_km = q.optional("trip_km", 0.0);
    if (e.t_request < 0) q.fail("t_request", "must be non-negative");
    if (e.passengers < 1) q.fail("passengers", "must be at least 1");
    if (e.trip_km < 0.0) q.fail("trip_km", "must be non-negative");
    if (e.origin == e.destination) q.fail("destination", "must differ from origin");
    d.requests.push_back(e);
  }
  return d;
}

nlohmann::json to_json(const DemandConfig& d) {
  auto requests = nlohmann::json::array();
  for (const auto& e : d.requests)
    requests.push_back({{"t_request", e.t_request},
                        {"origin", e.origin},
                        {"destination", e.destination},
                        {"passengers", e.passengers},
                        {"trip_km", e.trip_km}});
  nlohmann::json j{{"generate", d.generate},
          {"market", to_json(d.market)},
          {"profile",
           {{"base_share", d.profile.base_share},
            {"am_peak_h", d.profile.am_peak_h},
            {"pm_peak_h", d.profile.pm_peak_h},
            {"peak_sigma_h", d.profile.peak_sigma_h},
            {"am_share", d.profile.am_share},
            {"pm_share", d.profile.pm_share}}},
          {"group_size_probs", d.group_size_probs},
          {"region_margin_km", d.region_margin_km},
          {"window_min_min", d.window_min_min},
          {"window_max_min", d.window_max_min},
          {"requests", requests}};
  if (d.generate || !d.city.name.empty()) j["city"] = to_json(d.city);
  return j;
}

double profile_intensity(const DailyProfile& p, double hour) {
  return raw_intensity(p, hour) / normalizer(p);
}

double expected_daily_candidates(const DemandConfig& cfg) {
  return cfg.city.population * cfg.city.trip_rate * cfg.market.addressable_fraction *
         share_above(cfg.city.trip_length, cfg.market.min_uam_km);
}

std::vector<TripRequest> trip_candidates(const DemandConfig& cfg, const vertidrome::Network& net, int day,
                                         Rng& rng, std::uint64_t first_id) {
  std::vector<TripRequest> out;
  const double total = cfg.city.population * cfg.city.trip_rate * cfg.market.addressable_fraction;
  if (total <= 0.0 || net.size() < 2) return out;

  const auto& p = cfg.profile;
  const double z = normalizer(p);
  // Upper bound of the hourly intensity for thinning.
  const double peak = (p.base_share / 24.0 + (p.am_share + p.pm_share) / (p.peak_sigma_h * std::sqrt(2.0 * std::numbers::pi))) / z;
  const double rate_max = total * peak;  // per hour

  double x_lo = HUGE_VAL, x_hi = -HUGE_VAL, y_lo = HUGE_VAL, y_hi = -HUGE_VAL;
  for (const auto& v : net.nodes()) {
    x_lo = std::min(x_lo, v.x_km);
    x_hi = std::max(x_hi, v.x_km);
    y_lo = std::min(y_lo, v.y_km);
    y_hi = std::max(y_hi, v.y_km);
  }
  const double m = cfg.region_margin_km;
  boost::random::exponential_distribution<double> gap(rate_max);
  boost::random::uniform_01<double> u01;
  boost::random::uniform_real_distribution<double> ux(x_lo - m, x_hi + m);
  boost::random::uniform_real_distribution<double> uy(y_lo - m, y_hi + m);
  boost::random::lognormal_distribution<double> length(std::log(cfg.city.trip_length.median_km),
                                                       cfg.city.trip_length.sigma);

  const SimTime day_start = static_cast<SimTime>(day) * kDay;
  const SimTime lead = std::llround(cfg.window_min_min * 60.0);
  const SimTime wait = std::llround(cfg.window_max_min * 60.0);
  std::uint64_t id = first_id;
  double h = 0.0;
  while (true) {
    h += gap(rng);
    if (h >= 24.0) break;
    // Every draw happens for every arrival so that the stream stays aligned.
    const double accept = u01(rng);
    const double d = length(rng);
    const double ox = ux(rng);
    const double oy = uy(rng);
    const double theta = 2.0 * std::numbers::pi * u01(rng);
    const auto group = draw_index(cfg.group_size_probs, rng);
    if (accept * peak > raw_intensity(p, h) / z) continue;
    if (d < cfg.market.min_uam_km) continue;
    const int o = net.nearest(ox, oy);
    const int t = net.nearest(ox + d * std::cos(theta), oy + d * std::sin(theta));
    if (o == t) continue;
    TripRequest r;
    r.id = id++;
    r.t_request = day_start + static_cast<SimTime>(h * 3600.0);
    r.origin = o;
    r.destination = t;
    r.trip_km = d;
    r.passengers = static_cast<int>(group) + 1;
    r.t_min = r.t_request + lead;
    r.t_max = r.t_request + wait;
    out.push_back(r);
  }
  return out;
}

}  // namespace uam::demand
