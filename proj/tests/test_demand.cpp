#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numeric>

#include "support.hpp"
#include "uam/demand/choice.hpp"
#include "uam/demand/market.hpp"
#include "uam/demand/trips.hpp"
#include "uam/error.hpp"
#include "uam/vertidrome/network.hpp"

using namespace uam;
using namespace uam::demand;

TEST_CASE("softmax sums to one and survives huge utilities") {
  for (const auto& u : std::vector<std::vector<double>>{{0, 0}, {1, 2, 3}, {-800, 0, 800}, {1e3, 1e3 + 1e-9}}) {
    const auto p = softmax(u);
    CHECK(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) < 1e-12);
    for (double x : p) CHECK(std::isfinite(x));
  }
}

TEST_CASE("softmax is translation invariant") {
  const std::vector<double> u{-1.3, 0.2, 2.7};
  const auto a = softmax(u);
  for (double c : {-1000.0, -3.0, 5.0, 700.0}) {
    std::vector<double> v = u;
    for (auto& x : v) x += c;
    const auto b = softmax(v);
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-12);
  }
}

TEST_CASE("mode probabilities against a hand computation") {
  ChoiceParams p;  // beta_time -0.05, beta_cost -0.1
  const ModeOffer offer{{Mode::uam, 30.0, 60.0}, {Mode::car, 50.0, 7.0}, {Mode::transit, 70.0, 3.0}};
  // utilities: -7.5, -3.2, -3.8
  const double eu = std::exp(-7.5), ec = std::exp(-3.2), et = std::exp(-3.8);
  const auto pr = mode_probabilities(offer, p);
  CHECK(pr[0] == doctest::Approx(eu / (eu + ec + et)).epsilon(1e-12));
  CHECK(pr[1] == doctest::Approx(ec / (eu + ec + et)).epsilon(1e-12));
  CHECK(pr[2] == doctest::Approx(et / (eu + ec + et)).epsilon(1e-12));
  CHECK_THROWS_AS(mode_probabilities({offer[0]}, p), DomainError);
  CHECK_THROWS_AS(mode_probabilities({{Mode::uam, -1.0, 1.0}, offer[1]}, p), DomainError);
}

TEST_CASE("draw_index follows the probabilities") {
  RandomStreams s(5);
  auto rng = s.stream("draw");
  std::vector<int> hits(3, 0);
  for (int i = 0; i < 20000; ++i) ++hits[draw_index({0.2, 0.5, 0.3}, rng)];
  CHECK(hits[0] / 20000.0 == doctest::Approx(0.2).epsilon(0.05));
  CHECK(hits[1] / 20000.0 == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("daily profile integrates to one") {
  const DailyProfile p;
  const double total = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double h) { return profile_intensity(p, h); }, 0.0, 24.0, 10, 1e-12);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(profile_intensity(p, 8.0) > profile_intensity(p, 3.0));
}

TEST_CASE("access leg shrinks with vertiport density") {
  const MarketParams m;
  CHECK(access_leg(1.0, m) == doctest::Approx(21.2));
  CHECK(access_leg(4.0, m) == doctest::Approx(10.6));
  CHECK(access_time(4.0, m) == doctest::Approx(20.6));
}

TEST_CASE("generated trips are deterministic and well formed") {
  const auto s = testing::scenario(testing::read_json("scenarios/hamburg-like.json"));
  RandomStreams streams(s.seed);
  auto r1 = streams.stream("demand", 0);
  auto r2 = streams.stream("demand", 0);
  const auto a = trip_candidates(s.demand, s.network, 0, r1);
  const auto b = trip_candidates(s.demand, s.network, 0, r2);
  REQUIRE(a.size() == b.size());
  CHECK(a.size() > 2000);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].t_request == b[i].t_request);
    CHECK(a[i].origin != a[i].destination);
    CHECK(a[i].t_min == a[i].t_request + 600);
    CHECK(a[i].t_max == a[i].t_request + 2400);
    CHECK(a[i].passengers >= 1);
    CHECK(a[i].passengers <= 3);
    CHECK(a[i].t_request < kDay);
    if (i) CHECK(a[i].t_request >= a[i - 1].t_request);
  }
}

TEST_CASE("city demand falls with price and rises with density") {
  const auto cities = cities_from_json(testing::read_json("cities/synthetic25.json"));
  REQUIRE(cities.size() == 25);
  const MarketParams m;
  for (const auto& c : cities) {
    CHECK(city_uam_demand(c, 2.0, 1.0, m) >= city_uam_demand(c, 6.0, 1.0, m));
    CHECK(city_uam_demand(c, 4.0, 4.0, m) >= city_uam_demand(c, 4.0, 1.0, m));
  }
  CHECK_THROWS_AS(city_uam_demand(cities[0], 0.0, 1.0, m), DomainError);
}

TEST_CASE("2x2 scan has the favorable corner on top") {
  const auto cities = cities_from_json(testing::read_json("cities/synthetic25.json"));
  const auto r = global_scan(cities, ScanGrid{}, MarketParams{});
  CHECK(r.best_price == 0);
  CHECK(r.best_density == 1);
  CHECK(monotonicity_violations(r).empty());
}

TEST_CASE("one city, one cell") {
  const auto cities = cities_from_json(testing::read_json("cities/hamburg.json"));
  const auto r = global_scan(cities, ScanGrid{{4.0}, {2.0}}, MarketParams{});
  CHECK(r.cells.size() == 1);
  CHECK(monotonicity_violations(r).empty());
}

TEST_CASE("4x4 scan over the synthetic cities is cell-wise monotone") {
  const auto cities = cities_from_json(testing::read_json("cities/synthetic25.json"));
  const auto r = global_scan(cities, ScanGrid{{2, 4, 6, 8}, {0.5, 1, 2, 4}}, MarketParams{});
  CHECK(r.cells.size() == 25 * 16);
  CHECK(monotonicity_violations(r).empty());
  CHECK(r.best_price == 0);
  CHECK(r.best_density == 3);
}

TEST_CASE("city list validation") {
  auto j = testing::read_json("cities/hamburg.json");
  j["cities"][0]["population"] = -1;
  CHECK_THROWS_AS(cities_from_json(j), ConfigError);
  j["cities"][0]["populaton"] = 1;
  CHECK_THROWS_AS(cities_from_json(j), ConfigError);
}
