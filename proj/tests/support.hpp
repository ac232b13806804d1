#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "uam/energy/vehicle_spec.hpp"
#include "uam/sim/scenario.hpp"

namespace testing {

inline std::string data_path(const std::string& rel) { return std::string(UAM_DATA_DIR) + "/" + rel; }

inline nlohmann::json read_json(const std::string& rel) {
  std::ifstream in(data_path(rel));
  return nlohmann::json::parse(in);
}

inline uam::energy::VehicleSpec spec(const std::string& id) {
  return uam::energy::spec_from_json(read_json("specs/" + id + ".json"), id);
}

// Two multirotor vertidromes `km` apart, one vehicle at A, no generated demand.
inline nlohmann::json two_node_json(double km = 22.0) {
  auto j = read_json("scenarios/minimal.json");
  j["network"]["vertidromes"] = nlohmann::json::array(
      {{{"id", "A"}, {"x_km", 0.0}, {"y_km", 0.0}}, {{"id", "B"}, {"x_km", km}, {"y_km", 0.0}}});
  j["fleet"]["vehicles"] = nlohmann::json::array({{{"id", "V1"}, {"spec", "multirotor_near"}, {"home", "A"}}});
  j["demand"]["generate"] = false;
  j["demand"]["requests"] = nlohmann::json::array();
  return j;
}

inline nlohmann::json request(std::int64_t t, const std::string& o, const std::string& d, int pax = 1) {
  return {{"t_request", t}, {"origin", o}, {"destination", d}, {"passengers", pax}};
}

// Mode choice pinned to always or never choose the air taxi.
inline void force_choice(nlohmann::json& j, bool accept) {
  auto& c = j["demand"]["market"]["choice"];
  c["asc_uam"] = accept ? 200.0 : -200.0;
  c["beta_time"] = -1e-9;
  c["beta_cost"] = -1e-9;
}

inline uam::sim::Scenario scenario(const nlohmann::json& j) { return uam::sim::scenario_from_json(j); }

}  // namespace testing
