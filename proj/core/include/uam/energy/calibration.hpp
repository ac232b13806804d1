#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "uam/energy/energy_model.hpp"
#include "uam/energy/vehicle_spec.hpp"

namespace uam::energy {

enum class CalibrationMode { degradation_study, payload_range };

std::string_view to_string(CalibrationMode mode);

// A named target the fitted coefficients should reproduce.
//  - mission: mission_energy(mission) == target (fraction of C0)
//  - reserve: loiter reserve energy == target
//  - range:   payload_range(capacity_fraction, payload) == range_km
struct EnergyAnchor {
  enum class Kind { mission, reserve, range };

  std::string name;
  Kind kind = Kind::mission;
  Mission mission;
  double target = 0.0;
  double capacity_fraction = 1.0;
  int payload = 0;
  double range_km = 0.0;
};

struct AnchorResidual {
  std::string name;
  double target = 0.0;
  double fitted = 0.0;
  double residual = 0.0;  // fitted - target, in the anchor's own unit
};

struct CalibrationOptions {
  double tolerance = 1e-6;
  // p_loiter = loiter_ratio * e_fixed per minute; only their sum is observable.
  double loiter_ratio = 0.1;
  // e_km_person / e_km_base, used when the spec has no per-km prior.
  double fallback_person_ratio = 0.02;
};

struct EnergyCalibration {
  std::string spec_id;
  CalibrationMode mode = CalibrationMode::payload_range;
  std::vector<EnergyAnchor> anchors;
  EnergyCoefficients fitted;
  double person_ratio = 0.0;
  std::vector<AnchorResidual> residuals;
  double max_abs_residual = 0.0;
  bool within_tolerance = false;

  // Per-km energy at full payload and the payload-independent energy of a
  // single leg with reserve, as reported for two-point range fits.
  double aggregate_per_km(int persons) const noexcept { return fitted.per_km(persons); }
  double fixed_total_with_reserve(double reserve_loiter_min) const noexcept {
    return fitted.e_fixed + fitted.p_loiter * reserve_loiter_min;
  }
};

// Non-negative least-squares fit of (e_fixed, e_km_base), with p_loiter tied to
// e_fixed and e_km_person tied to e_km_base by the spec's existing ratio.
// Throws CalibrationError when fewer than two anchors are given, when an anchor
// does not belong to the mode, or when the anchors leave a direction free.
EnergyCalibration calibrate_energy_model(const VehicleSpec& spec,
                                         const std::vector<EnergyAnchor>& anchors,
                                         CalibrationMode mode,
                                         const CalibrationOptions& options = {});

VehicleSpec apply_calibration(VehicleSpec spec, const EnergyCalibration& calibration);

// Residuals of arbitrary anchors against a spec, without fitting.
std::vector<AnchorResidual> evaluate_anchors(const VehicleSpec& spec,
                                             const std::vector<EnergyAnchor>& anchors);

EnergyAnchor anchor_from_json(const nlohmann::json& node, const VehicleSpec& spec,
                              const std::string& where);
nlohmann::json to_json(const EnergyCalibration& calibration, const VehicleSpec& spec);

}  // namespace uam::energy
