#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "uam/battery/battery.hpp"
#include "uam/demand/trips.hpp"
#include "uam/econ/cost_model.hpp"
#include "uam/energy/vehicle_spec.hpp"
#include "uam/time.hpp"
#include "uam/vertidrome/network.hpp"

namespace uam::sim {

struct VehicleConfig {
  std::string id;
  std::string spec;
  std::string home;  // vertidrome id
};

struct FleetConfig {
  std::vector<energy::VehicleSpec> specs;
  std::vector<VehicleConfig> vehicles;

  int spec_index(const std::string& id) const;  // -1 when absent
};

// One cost parameter set: a base plus per-spec overrides.
struct EconConfig {
  std::string cost_set = "optimistic";
  econ::CostParams base;
  std::map<std::string, nlohmann::json> per_spec;

  econ::CostParams params(const std::string& spec_id) const;
};

struct RepositionConfig {
  bool enabled = false;
  double window_min = 60.0;  // trailing window for no-vehicle rejections
  int threshold = 3;
};

struct OpsConfig {
  double boarding_min = 5.0;
  double corridor_separation_s = 60.0;
  bool piloted = true;
  bool pooling = true;
  std::string use_case = "intra_city";
  RepositionConfig reposition;
};

struct Scenario {
  std::uint64_t seed = 0;
  SimTime horizon_s = kDay;
  vertidrome::Network network;
  FleetConfig fleet;
  demand::DemandConfig demand;
  EconConfig econ;
  battery::AgingParams aging;
  OpsConfig ops;
};

// Parses and validates. ParseError on syntax, ConfigError naming the key on
// semantics, InfeasibleError when a spec cannot fly its design mission.
Scenario load_scenario(std::string_view text);
Scenario scenario_from_json(const nlohmann::json& node);
Scenario load_scenario_file(const std::string& path);  // std::ios_base::failure on I/O

// Every field explicit, keys sorted, two-space indent.
nlohmann::json to_json(const Scenario& s);
std::string serialize(const Scenario& s);

std::string read_text_file(const std::string& path);

}  // namespace uam::sim
