#include <doctest.h>

#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <cmath>

#include "support.hpp"
#include "uam/battery/aging_calibration.hpp"
#include "uam/battery/battery.hpp"
#include "uam/battery/cycle_life.hpp"
#include "uam/energy/energy_model.hpp"
#include "uam/error.hpp"
#include "uam/random.hpp"

using namespace uam;
using namespace uam::battery;

namespace {

AgingParams calibrated() {
  return aging_from_json(testing::read_json("calibration/aging_params.json")["params"]);
}

// The fade model written out directly.
double fade_oracle(const AgingParams& p, double days, double q, double dod) {
  return 1.0 - p.alpha_cal * std::pow(days, p.z_cal) - (p.beta0 + p.beta1 * dod) * std::pow(q, p.z_cyc);
}

}  // namespace

TEST_CASE("closed form matches the written-out model") {
  const AgingParams p;
  CHECK(capacity_closed_form(p, 365.0, 1000.0, 0.5) == doctest::Approx(fade_oracle(p, 365.0, 1000.0, 0.5)));
  CHECK(calendar_loss(p, 100.0) == doctest::Approx(p.alpha_cal * std::pow(100.0, 0.75)));
  CHECK(capacity_closed_form(p, 0.0, 0.0, 0.3) == 1.0);
}

TEST_CASE("constant-depth flights reproduce the closed form") {
  const auto p = calibrated();
  auto b = fresh_battery();
  for (int day = 0; day < 30; ++day) {
    for (int i = 0; i < 10; ++i) {
      b = apply_flight(b, p, {0.4 / b.capacity_fraction, 600.0});
      b.soc = 1.0;
    }
    b = apply_calendar(b, p, 1.0);
  }
  CHECK(b.flight_cycles == 300);
  CHECK(b.capacity_fraction == doctest::Approx(capacity_closed_form(p, b.age_days, b.throughput_fec, dod_avg(p, b))));
  CHECK(dod_avg(p, b) == doctest::Approx(0.4).epsilon(1e-6));
}

TEST_CASE("apply_flight rejects impossible depths") {
  const AgingParams p;
  auto b = fresh_battery();
  b.soc = 0.3;
  CHECK_THROWS_AS(apply_flight(b, p, {0.0, 60.0}), DomainError);
  CHECK_THROWS_AS(apply_flight(b, p, {0.31, 60.0}), DomainError);
  CHECK_NOTHROW(apply_flight(b, p, {0.3, 60.0}));
}

TEST_CASE("capacity is monotone non-increasing under random interleavings") {
  const auto p = calibrated();
  RandomStreams streams(99);
  auto rng = streams.stream("aging-interleave");
  boost::random::uniform_01<double> u;
  boost::random::uniform_int_distribution<int> op(0, 2);
  auto b = fresh_battery();
  double last = b.capacity_fraction;
  for (int i = 0; i < 10000; ++i) {
    switch (op(rng)) {
      case 0:
        // flights are refused past the knee; calendar and charging go on
        if (b.soc > 0.02 && !b.beyond_model_validity)
          b = apply_flight(b, p, {0.01 + u(rng) * (b.soc - 0.01), 900.0});
        break;
      case 1: b = charge(b, p, 0.5 + u(rng), std::max(b.soc, u(rng))).state; break;
      default: b = apply_calendar(b, p, u(rng) * 2.0); break;
    }
    CHECK(b.capacity_fraction <= last);
    last = b.capacity_fraction;
  }
}

TEST_CASE("fade is path independent") {
  const auto p = calibrated();
  // same multiset of flights and days in two different orders
  std::vector<double> dods{0.2, 0.5, 0.35, 0.6, 0.1, 0.45};
  auto run = [&](bool reversed, bool calendar_first) {
    auto b = fresh_battery();
    if (calendar_first) b = apply_calendar(b, p, 40.0);
    auto order = dods;
    if (reversed) std::reverse(order.begin(), order.end());
    for (int rep = 0; rep < 50; ++rep)
      for (double d : order) {
        // same nominal depth whatever the current capacity
        b.soc = 1.0;
        b = apply_flight(b, p, {d / b.capacity_fraction, 600.0});
      }
    if (!calendar_first) b = apply_calendar(b, p, 40.0);
    return b.capacity_fraction;
  };
  const double a = run(false, false);
  CHECK(std::abs(run(true, false) - a) < 1e-9);
  CHECK(std::abs(run(false, true) - a) < 1e-9);
}

TEST_CASE("charge duration follows the C-rate") {
  const AgingParams p;
  auto b = fresh_battery();
  b.soc = 0.45;
  const auto r = charge(b, p, 1.0);
  CHECK(r.duration_s == doctest::Approx(0.55 * 3600.0));
  CHECK(r.state.soc == 1.0);
  CHECK(charge(b, p, 2.0).duration_s == doctest::Approx(0.55 * 1800.0));
}

TEST_CASE("calibrated aging reproduces the cycle-life ranges") {
  const auto p = calibrated();
  struct Case {
    const char* spec;
    double threshold;
    double lo, hi;
  };
  const Case cases[] = {{"multirotor_near", 0.80, 1470, 1610}, {"multirotor_near", 0.75, 2300, 2500},
                        {"tiltrotor_near", 0.79, 490, 560},    {"tiltrotor_far", 0.80, 610, 680},
                        {"tiltrotor_far", 0.75, 940, 1050}};
  for (const auto& c : cases) {
    const auto s = testing::spec(c.spec);
    const double mid = 0.5 * (c.lo + c.hi);
    // payload 1 to 4 spans the range
    for (int payload : {1, 4}) {
      const auto life = cycles_to_threshold(s, p, design_profile(s, payload), c.threshold);
      CHECK(life.cycles > 0.9 * c.lo);
      CHECK(life.cycles < 1.1 * c.hi);
    }
    const double centre = 0.5 * (cycles_to_threshold(s, p, design_profile(s, 1), c.threshold).fractional_cycles +
                                 cycles_to_threshold(s, p, design_profile(s, 4), c.threshold).fractional_cycles);
    CHECK(std::abs(centre - mid) / mid < 0.10);
  }
}

TEST_CASE("cycle loss dominates at replacement for busy profiles") {
  const auto p = calibrated();
  for (const char* id : {"multirotor_near", "tiltrotor_near", "tiltrotor_far"}) {
    const auto s = testing::spec(id);
    for (int fpd : {10, 15, 20, 30}) {
      auto prof = design_profile(s, 4);
      prof.flights_per_day = fpd;
      const auto life = cycles_to_threshold(s, p, prof, 0.80);
      CHECK(life.cycle_loss > life.calendar_loss);
    }
  }
}

TEST_CASE("cycles_to_threshold guards its domain") {
  const auto p = calibrated();
  const auto s = testing::spec("multirotor_near");
  CHECK_THROWS_AS(cycles_to_threshold(s, p, design_profile(s, 4), 0.7), DomainError);
  DutyProfile huge{energy::single_leg(500.0, 4), 10, 1.0};
  CHECK_THROWS_AS(cycles_to_threshold(s, p, huge, 0.8), InfeasibleError);
}

TEST_CASE("replacement policy") {
  const auto p = calibrated();
  const auto s = testing::spec("multirotor_near");
  auto b = fresh_battery();
  CHECK(replacement_policy(b, p, s) == ReplacementDecision::keep);
  b.capacity_fraction = 0.79;
  CHECK(replacement_policy(b, p, s) == ReplacementDecision::replace);
  auto energy = p;
  energy.replace.energy_driven = true;
  CHECK(replacement_fraction(energy, s) == doctest::Approx(energy::mission_energy(s, energy::design_mission(s, 4))));
  CHECK(replacement_policy(b, energy, s) == ReplacementDecision::keep);
}

TEST_CASE("aging calibration refuses underdetermined input") {
  const auto targets = aging_targets_from_json(testing::read_json("calibration/aging_targets.json"));
  SpecLibrary lib;
  for (const char* id : {"multirotor_near", "tiltrotor_near", "tiltrotor_far"}) lib.emplace(id, testing::spec(id));
  CHECK_THROWS_AS(calibrate_aging({}, lib), CalibrationError);
  CHECK_THROWS_AS(calibrate_aging({targets[0], targets[1]}, lib), CalibrationError);
}

TEST_CASE("only the reference temperature is accepted") {
  auto j = to_json(AgingParams{});
  j["temperature_c"] = 35.0;
  CHECK_THROWS_AS(aging_from_json(j), ConfigError);
}
