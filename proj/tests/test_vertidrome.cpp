#include <doctest.h>

#include <boost/random/uniform_int_distribution.hpp>
#include <cmath>

#include "uam/error.hpp"
#include "uam/random.hpp"
#include "uam/vertidrome/corridor.hpp"
#include "uam/vertidrome/los.hpp"
#include "uam/vertidrome/network.hpp"
#include "uam/vertidrome/slot_table.hpp"
#include "uam/vertidrome/stands.hpp"

using namespace uam;
using namespace uam::vertidrome;

namespace {

Vertidrome node(const std::string& id, double x, double y, int fato = 1) {
  Vertidrome v;
  v.id = id;
  v.x_km = x;
  v.y_km = y;
  v.n_fato = fato;
  v.n_stands = 2 * fato;
  return v;
}

// Earliest (fato, t) by scanning every second.
std::optional<SlotTable::Candidate> brute_force(const std::vector<std::vector<SimTime>>& starts, SimTime span,
                                                SimTime t0, SimTime horizon) {
  for (SimTime t = t0; t <= horizon; ++t)
    for (std::size_t f = 0; f < starts.size(); ++f) {
      bool ok = true;
      for (SimTime s : starts[f])
        if (std::llabs(s - t) < span) ok = false;
      if (ok) return SlotTable::Candidate{static_cast<int>(f), t};
    }
  return std::nullopt;
}

}  // namespace

TEST_CASE("network geometry and validation") {
  const auto net = build_network({node("A", 0, 0), node("B", 3, 4), node("C", 0, 10)});
  CHECK(net.distance_km(0, 1) == doctest::Approx(5.0));
  CHECK(net.route(0, 1).corridor == net.route(1, 0).corridor);
  CHECK(net.route(0, 2).corridor != net.route(0, 1).corridor);
  CHECK(net.nearest(0.1, 9.0) == 2);
  CHECK_THROWS_AS(net.index_of("Z"), ConfigError);
  CHECK_THROWS_AS(build_network({node("A", 0, 0), node("A", 1, 1)}), ConfigError);
  CHECK_THROWS_AS(build_network({node("A", 0, 0), node("B", 0, 0)}), ConfigError);
  CHECK_THROWS_AS(build_network({node("A", 0, 0)}), ConfigError);
  CHECK_NOTHROW(build_network({node("A", 0, 0)}, "network", 1));
}

TEST_CASE("slot table spacing and horizon") {
  const auto v = node("A", 0, 0);
  SlotTable t(0, v, 1000);
  CHECK(t.span() == 150);
  const auto a = t.request_slot(Movement::departure, 100);
  CHECK(a.t_start == 100);
  const auto b = t.request_slot(Movement::arrival, 120);
  CHECK(b.t_start == 250);
  CHECK(b.delay() == 130);
  CHECK_THROWS_AS(t.book(0, 300, Movement::arrival, 300), DomainError);
  CHECK_FALSE(t.probe(1001).has_value());
  t.release(b);
  CHECK(t.probe(120)->t_start == 250);
  CHECK(t.is_free(0, 250));
}

TEST_CASE("request_slot equals the brute-force earliest slot over 500 random instances") {
  RandomStreams streams(2024);
  for (std::uint64_t inst = 0; inst < 500; ++inst) {
    auto rng = streams.stream("slot-instances", inst);
    boost::random::uniform_int_distribution<int> fatos(1, 3);
    boost::random::uniform_int_distribution<SimTime> when(0, 2400);
    boost::random::uniform_int_distribution<int> count(0, 25);
    auto v = node("A", 0, 0, fatos(rng));
    v.fato_occupancy_s = static_cast<double>(boost::random::uniform_int_distribution<int>(30, 90)(rng));
    v.min_separation_s = static_cast<double>(boost::random::uniform_int_distribution<int>(0, 120)(rng));
    const SimTime horizon = 3600;
    SlotTable table(0, v, horizon);
    std::vector<std::vector<SimTime>> starts(static_cast<std::size_t>(v.n_fato));
    const int n = count(rng);
    bool all_ok = true;
    for (int i = 0; i < n; ++i) {
      const SimTime t0 = when(rng);
      const auto expect = brute_force(starts, table.span(), t0, horizon);
      const auto got = table.probe(t0);
      if (expect.has_value() != got.has_value()) {
        all_ok = false;
        break;
      }
      if (!expect) continue;
      if (expect->fato != got->fato || expect->t_start != got->t_start) {
        all_ok = false;
        break;
      }
      const auto slot = table.request_slot(Movement::departure, t0);
      starts[static_cast<std::size_t>(slot.fato)].push_back(slot.t_start);
    }
    CHECK_MESSAGE(all_ok, "instance ", inst);
  }
}

TEST_CASE("corridor separation by direction") {
  CorridorTable c(60);
  c.book(0, 0, 1000, 1);
  CHECK(c.required_delay(0, 0, 1000) == 60);
  CHECK(c.required_delay(0, 0, 970) == 90);
  CHECK(c.required_delay(0, 0, 900) == 0);
  CHECK(c.required_delay(0, 1, 1000) == 0);
  CHECK(c.required_delay(1, 0, 1000) == 0);
  c.book(0, 0, 1070, 2);
  // a gap too small for a third flight is skipped entirely
  CHECK(c.required_delay(0, 0, 1010) == 120);
  c.release(0, 0, 1000);
  CHECK(c.required_delay(0, 0, 1000) == 0);
}

TEST_CASE("flight duration for the 22 km multirotor hop") {
  CHECK(flight_duration(22.0, 120.0) == 660);
  const auto net = build_network({node("A", 0, 0), node("B", 22, 0)});
  CorridorTable c(60);
  const auto tr = deconflict_trajectory(net.route(0, 1), 600, c, 120.0);
  CHECK(tr.t_dep == 600);
  CHECK(tr.t_arr == 1260);
  CHECK(tr.ground_delay == 0);
}

TEST_CASE("stand manager queues in FIFO order") {
  StandManager s(2);
  CHECK(s.acquire(1).has_value());
  CHECK(s.acquire(2).has_value());
  CHECK_FALSE(s.acquire(3).has_value());
  CHECK_FALSE(s.acquire(4).has_value());
  CHECK(s.waiting() == 2);
  CHECK(s.release(1) == std::optional<int>(3));
  CHECK(s.holds(3));
  CHECK(s.occupied() == 2);
  CHECK(s.peak() == 2);
}

TEST_CASE("stand plan counts overlapping stays") {
  StandPlan p(1);
  const auto h = p.add(0, 100);
  CHECK_FALSE(p.fits(100, 200));
  CHECK(p.fits(101, 200));
  CHECK(p.next_release_after(50) == std::optional<SimTime>(100));
  p.set_until(h, kOpenEnd);
  CHECK_FALSE(p.next_release_after(50).has_value());
  p.remove(h);
  CHECK(p.fits(0, kOpenEnd));
}

TEST_CASE("level of service grades on the nearest-rank p95") {
  CHECK(percentile_nearest_rank({}, 0.95) == 0.0);
  std::vector<double> d(100);
  for (int i = 0; i < 100; ++i) d[static_cast<std::size_t>(i)] = i + 1;
  CHECK(percentile_nearest_rank(d, 0.95) == 95.0);
  CHECK(grade_for(60) == LosGrade::A);
  CHECK(grade_for(61) == LosGrade::B);
  CHECK(grade_for(180) == LosGrade::B);
  CHECK(grade_for(600) == LosGrade::C);
  CHECK(grade_for(601) == LosGrade::D);
  CHECK(airside_los(0, {}).grade == LosGrade::no_traffic);
  const auto los = airside_los(0, d);
  CHECK(los.movements == 100);
  CHECK(los.mean_delay_s == doctest::Approx(50.5));
  CHECK(los.grade == LosGrade::B);
}
