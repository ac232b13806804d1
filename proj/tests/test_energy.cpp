#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "uam/energy/calibration.hpp"
#include "uam/energy/energy_model.hpp"
#include "uam/error.hpp"

using namespace uam;
using namespace uam::energy;

namespace {

// Largest d with mission_energy(single_leg(d)) <= cap, by bisection.
double bisect_range(const VehicleSpec& s, double cap, int payload) {
  double lo = 0.0, hi = 1000.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mission_energy(s, single_leg(mid, payload)) <= cap ? lo : hi) = mid;
  }
  return lo;
}

std::vector<EnergyAnchor> anchors_for(const std::string& file, const std::string& id, const VehicleSpec& s) {
  const auto j = testing::read_json("calibration/" + file);
  std::vector<EnergyAnchor> out;
  for (const auto& a : j["specs"][id]) out.push_back(anchor_from_json(a, s, "anchor"));
  return out;
}

}  // namespace

TEST_CASE("mission energy is affine in legs, distance and payload") {
  auto s = testing::spec("multirotor_near");
  const auto& e = s.energy;
  const double d = 22.0;
  CHECK(mission_energy(s, single_leg(d, 2, false)) == doctest::Approx(e.e_fixed + (e.e_km_base + 2 * e.e_km_person) * d));
  CHECK(mission_energy(s, single_leg(d, 2, true)) ==
        doctest::Approx(e.e_fixed + (e.e_km_base + 2 * e.e_km_person) * d + e.p_loiter * s.reserve_loiter_min));
  Mission two;
  two.payload = 1;
  two.reserve_included = false;
  two.legs = {{"A", "B", 10.0}, {"B", "C", 5.0}};
  CHECK(mission_energy(s, two) == doctest::Approx(2 * e.e_fixed + e.per_km(1) * 15.0));
}

TEST_CASE("design missions take the stated battery fractions") {
  const std::pair<const char*, double> cases[] = {
      {"multirotor_near", 0.55}, {"tiltrotor_near", 0.79}, {"tiltrotor_far", 0.71}};
  for (const auto& [id, target] : cases) {
    const auto s = testing::spec(id);
    CHECK(mission_energy(s, design_mission(s, s.max_payload_persons)) == doctest::Approx(target).epsilon(1e-9));
  }
}

TEST_CASE("payload range matches the bisection oracle") {
  for (const char* id : {"multirotor_near", "tiltrotor_near", "tiltrotor_far"}) {
    const auto s = testing::spec(id);
    for (double cap : {1.0, 0.9, 0.8, 0.75})
      for (int p = 0; p <= s.max_payload_persons; ++p)
        CHECK(std::abs(payload_range(s, cap, p) - bisect_range(s, cap, p)) < 0.01);
  }
}

TEST_CASE("range is zero when fixed terms do not fit") {
  auto s = testing::spec("multirotor_near");
  CHECK(payload_range(s, 0.05, 4) == 0.0);
}

TEST_CASE("feasibility reports the deficit") {
  const auto s = testing::spec("multirotor_near");
  const auto m = single_leg(22.0, 4);
  const auto f = mission_feasible(s, 1.0, 1.0, m);
  CHECK(f.feasible);
  CHECK(f.deficit == 0.0);
  const auto g = mission_feasible(s, 1.0, 0.1, m);
  CHECK_FALSE(g.feasible);
  CHECK(g.deficit == doctest::Approx(g.required - 0.1));
}

TEST_CASE("two-point range fit equals the 2x2 closed-form solve") {
  const auto s = testing::spec("tiltrotor_far");
  const auto anchors = anchors_for("energy_range_fade_anchors.json", "tiltrotor_far", s);
  const auto cal = calibrate_energy_model(s, anchors, CalibrationMode::payload_range);
  // Anchors: F + k*160 = 1.0 and F + k*107 = 0.8, with F the payload-free
  // energy incl. reserve and k the per-km energy at 4 persons.
  const double k = 0.2 / 53.0;
  const double f = 1.0 - 160.0 * k;
  CHECK(cal.aggregate_per_km(4) == doctest::Approx(k).epsilon(1e-9));
  CHECK(cal.fixed_total_with_reserve(s.reserve_loiter_min) == doctest::Approx(f).epsilon(1e-9));
  const auto fitted = apply_calibration(s, cal);
  CHECK(std::abs(payload_range(fitted, 1.0, 4) - 160.0) < 1e-6);
  CHECK(std::abs(payload_range(fitted, 0.8, 4) - 107.0) < 1e-6);
  CHECK(std::abs(payload_range(fitted, 0.8, 4) - bisect_range(fitted, 0.8, 4)) < 0.01);
}

TEST_CASE("degradation-study anchors fit exactly") {
  for (const char* id : {"multirotor_near", "tiltrotor_near", "tiltrotor_far"}) {
    const auto s = testing::spec(id);
    const auto cal = calibrate_energy_model(s, anchors_for("energy_design_anchors.json", id, s),
                                            CalibrationMode::degradation_study);
    CHECK(cal.within_tolerance);
    CHECK(cal.max_abs_residual < 1e-9);
  }
}

TEST_CASE("calibration needs two anchors of the right kind") {
  const auto s = testing::spec("tiltrotor_far");
  auto anchors = anchors_for("energy_range_fade_anchors.json", "tiltrotor_far", s);
  anchors.pop_back();
  CHECK_THROWS_AS(calibrate_energy_model(s, anchors, CalibrationMode::payload_range), CalibrationError);
  auto design = anchors_for("energy_design_anchors.json", "tiltrotor_far", s);
  CHECK_THROWS_AS(calibrate_energy_model(s, design, CalibrationMode::payload_range), CalibrationError);
  // the same anchor twice leaves a direction free
  auto twice = anchors_for("energy_range_fade_anchors.json", "tiltrotor_far", s);
  twice[1] = twice[0];
  CHECK_THROWS_AS(calibrate_energy_model(s, twice, CalibrationMode::payload_range), CalibrationError);
}

TEST_CASE("a spec that cannot fly its design mission is infeasible") {
  auto j = testing::read_json("specs/multirotor_near.json");
  j["energy"]["e_km_base"] = 0.02;
  CHECK_THROWS_AS(spec_from_json(j), InfeasibleError);
  j["seats"] = -1;
  CHECK_THROWS_AS(spec_from_json(j), ConfigError);
}
