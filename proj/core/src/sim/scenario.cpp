#include "uam/sim/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "uam/error.hpp"
#include "uam/json_reader.hpp"

namespace uam::sim {
namespace {

FleetConfig fleet_from_json(const JsonReader& r, const vertidrome::Network& net) {
  r.only_keys({"specs", "vehicles"});
  FleetConfig f;
  std::set<std::string> spec_ids;
  for (const auto& s : r.objects("specs")) {
    f.specs.push_back(energy::spec_from_json(s.raw(), s.path()));
    if (!spec_ids.insert(f.specs.back().id).second) s.fail("id", "duplicate spec id " + f.specs.back().id);
  }
  std::set<std::string> ids;
  std::map<std::string, int> per_home;
  for (const auto& v : r.objects("vehicles")) {
    v.only_keys({"id", "spec", "home"});
    VehicleConfig c;
    c.id = v.required<std::string>("id");
    c.spec = v.required<std::string>("spec");
    c.home = v.required<std::string>("home");
    if (!ids.insert(c.id).second) v.fail("id", "duplicate vehicle id " + c.id);
    if (f.spec_index(c.spec) < 0) v.fail("spec", "unknown spec " + c.spec);
    int home = -1;
    try {
      home = net.index_of(c.home);
    } catch (const ConfigError&) {
      v.fail("home", "unknown vertidrome " + c.home);
    }
    if (++per_home[c.home] > net.at(home).n_stands)
      v.fail("home", "more vehicles based at " + c.home + " than it has stands");
    f.vehicles.push_back(c);
  }
  return f;
}

EconConfig econ_from_json(const JsonReader& r) {
  r.only_keys({"cost_set", "base", "per_spec"});
  EconConfig e;
  e.cost_set = r.optional<std::string>("cost_set", e.cost_set);
  if (r.has("base")) e.base = econ::costs_from_json(r.raw().at("base"), e.base, r.key_path("base"));
  if (r.has("per_spec")) {
    auto ps = r.object("per_spec");
    for (const auto& o : ps.raw().items()) {
      econ::costs_from_json(o.value(), e.base, ps.key_path(o.key()));
      e.per_spec[o.key()] = o.value();
    }
  }
  return e;
}

OpsConfig ops_from_json(const JsonReader& r) {
  r.only_keys({"boarding_min", "corridor_separation_s", "piloted", "pooling", "use_case", "reposition"});
  OpsConfig o;
  o.boarding_min = r.optional("boarding_min", o.boarding_min);
  o.corridor_separation_s = r.optional("corridor_separation_s", o.corridor_separation_s);
  o.piloted = r.optional("piloted", o.piloted);
  o.pooling = r.optional("pooling", o.pooling);
  o.use_case = r.optional<std::string>("use_case", o.use_case);
  if (o.boarding_min < 0.0) r.fail("boarding_min", "must be non-negative");
  if (!(o.corridor_separation_s > 0.0)) r.fail("corridor_separation_s", "must be positive");
  if (r.has("reposition")) {
    auto p = r.object("reposition");
    p.only_keys({"enabled", "window_min", "threshold"});
    o.reposition.enabled = p.optional("enabled", o.reposition.enabled);
    o.reposition.window_min = p.optional("window_min", o.reposition.window_min);
    o.reposition.threshold = p.optional("threshold", o.reposition.threshold);
    if (!(o.reposition.window_min > 0.0)) p.fail("window_min", "must be positive");
    if (o.reposition.threshold < 1) p.fail("threshold", "must be at least 1");
  }
  return o;
}

}  // namespace

int FleetConfig::spec_index(const std::string& id) const {
  for (std::size_t i = 0; i < specs.size(); ++i)
    if (specs[i].id == id) return static_cast<int>(i);
  return -1;
}

econ::CostParams EconConfig::params(const std::string& spec_id) const {
  auto it = per_spec.find(spec_id);
  if (it == per_spec.end()) return base;
  return econ::costs_from_json(it->second, base, "econ.per_spec." + spec_id);
}

Scenario scenario_from_json(const nlohmann::json& node) {
  JsonReader r(node, "");
  r.only_keys({"seed", "horizon_s", "network", "fleet", "demand", "econ", "aging", "ops"});
  Scenario s;
  s.seed = r.required<std::uint64_t>("seed");
  s.horizon_s = r.required<SimTime>("horizon_s");
  if (s.horizon_s < 0) r.fail("horizon_s", "must be non-negative");
  if (!r.has("network")) r.fail("network", "missing required key");
  s.network = vertidrome::network_from_json(r.raw().at("network"), "network", 1);
  s.fleet = fleet_from_json(r.object("fleet"), s.network);
  if (!r.has("demand")) r.fail("demand", "missing required key");
  s.demand = demand::demand_from_json(r.raw().at("demand"), "demand");
  for (std::size_t i = 0; i < s.demand.requests.size(); ++i) {
    const auto& q = s.demand.requests[i];
    const std::string p = "demand.requests[" + std::to_string(i) + "]";
    try {
      s.network.index_of(q.origin);
    } catch (const ConfigError&) {
      throw ConfigError(p + ".origin", "unknown vertidrome " + q.origin);
    }
    try {
      s.network.index_of(q.destination);
    } catch (const ConfigError&) {
      throw ConfigError(p + ".destination", "unknown vertidrome " + q.destination);
    }
  }
  if (r.has("econ")) s.econ = econ_from_json(r.object("econ"));
  for (const auto& [id, j] : s.econ.per_spec)
    if (s.fleet.spec_index(id) < 0) throw ConfigError("econ.per_spec." + id, "unknown spec " + id);
  if (r.has("aging")) s.aging = battery::aging_from_json(r.raw().at("aging"), "aging");
  if (r.has("ops")) s.ops = ops_from_json(r.object("ops"));
  for (const auto& spec : s.fleet.specs)
    if (s.ops.piloted && spec.max_payload_persons < 2)
      throw ConfigError("fleet.specs", "piloted operation needs room for a passenger on " + spec.id);
  return s;
}

Scenario load_scenario(std::string_view text) { return scenario_from_json(parse_json(text)); }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Scenario load_scenario_file(const std::string& path) { return load_scenario(read_text_file(path)); }

nlohmann::json to_json(const Scenario& s) {
  auto specs = nlohmann::json::array();
  for (const auto& sp : s.fleet.specs) specs.push_back(energy::to_json(sp));
  auto vehicles = nlohmann::json::array();
  for (const auto& v : s.fleet.vehicles) vehicles.push_back({{"id", v.id}, {"spec", v.spec}, {"home", v.home}});
  nlohmann::json per_spec = nlohmann::json::object();
  for (const auto& [id, j] : s.econ.per_spec) per_spec[id] = j;
  return {{"seed", s.seed},
          {"horizon_s", s.horizon_s},
          {"network", vertidrome::to_json(s.network)},
          {"fleet", {{"specs", specs}, {"vehicles", vehicles}}},
          {"demand", demand::to_json(s.demand)},
          {"econ", {{"cost_set", s.econ.cost_set}, {"base", econ::to_json(s.econ.base)}, {"per_spec", per_spec}}},
          {"aging", battery::to_json(s.aging)},
          {"ops",
           {{"boarding_min", s.ops.boarding_min},
            {"corridor_separation_s", s.ops.corridor_separation_s},
            {"piloted", s.ops.piloted},
            {"pooling", s.ops.pooling},
            {"use_case", s.ops.use_case},
            {"reposition",
             {{"enabled", s.ops.reposition.enabled},
              {"window_min", s.ops.reposition.window_min},
              {"threshold", s.ops.reposition.threshold}}}}}};
}

std::string serialize(const Scenario& s) { return to_json(s).dump(2) + "\n"; }

}  // namespace uam::sim
