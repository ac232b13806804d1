#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "uam/battery/cycle_life.hpp"

namespace uam::battery {

// A reported cycle-count range. With payload_min < payload_max, the range
// endpoints map to the payloads: most persons -> fewest cycles.
struct AgingTarget {
  std::string spec;
  int flights_per_day = 0;  // 0: the spec's reference duty cycle
  int payload_min = 4;
  int payload_max = 4;
  double threshold = 0.80;
  double min_cycles = 0.0;
  double max_cycles = 0.0;
};

struct AgingResidual {
  std::string spec;
  int payload = 0;
  double threshold = 0.0;
  double dod = 0.0;
  double target = 0.0;
  double predicted = 0.0;
  double relative_error = 0.0;
  double calendar_loss = 0.0;
  double cycle_loss = 0.0;
};

struct AgingCalibrationOptions {
  AgingParams start;  // exponents, knee and charge weighting are held fixed
  int max_iterations = 4000;
  double simplex_tolerance = 1e-4;
  // Cycle loss must exceed calendar loss at the crossing for targets with at
  // least this many flights per day and this nominal DOD.
  int dominance_min_flights_per_day = 10;
  double dominance_min_dod = 0.2;
};

struct AgingCalibration {
  AgingParams params;
  std::vector<AgingResidual> residuals;
  double objective = 0.0;
  double max_relative_error = 0.0;
  int iterations = 0;
};

using SpecLibrary = std::map<std::string, energy::VehicleSpec>;

AgingCalibration calibrate_aging(const std::vector<AgingTarget>& targets, const SpecLibrary& specs,
                                 const AgingCalibrationOptions& options = {});

// Evaluate fixed params against targets without fitting.
std::vector<AgingResidual> evaluate_aging(const std::vector<AgingTarget>& targets,
                                          const SpecLibrary& specs, const AgingParams& params);

std::vector<AgingTarget> aging_targets_from_json(const nlohmann::json& node);
nlohmann::json to_json(const AgingCalibration& c);

}  // namespace uam::battery
