#include "uam/vertidrome/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "uam/error.hpp"
#include "uam/json_reader.hpp"

namespace uam::vertidrome {

Network::Network(std::vector<Vertidrome> nodes) : nodes_(std::move(nodes)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) index_[nodes_[i].id] = static_cast<int>(i);
}

int Network::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw ConfigError(id, "unknown vertidrome");
  return it->second;
}

double Network::distance_km(int a, int b) const {
  const auto& p = at(a);
  const auto& q = at(b);
  return std::hypot(p.x_km - q.x_km, p.y_km - q.y_km);
}

Route Network::route(int origin, int destination) const {
  if (origin == destination) throw DomainError("route needs distinct vertidromes");
  const int n = static_cast<int>(size());
  const int lo = std::min(origin, destination);
  const int hi = std::max(origin, destination);
  // Row-major index of the upper triangle.
  const int corridor = lo * n - lo * (lo + 1) / 2 + (hi - lo - 1);
  return Route{origin, destination, distance_km(origin, destination), corridor};
}

int Network::nearest(double x_km, double y_km) const {
  int best = 0;
  double best_d = HUGE_VAL;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const double d = std::hypot(nodes_[i].x_km - x_km, nodes_[i].y_km - y_km);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

Network build_network(std::vector<Vertidrome> nodes, const std::string& where, std::size_t min_nodes) {
  if (nodes.size() < std::max<std::size_t>(min_nodes, 1))
    throw ConfigError(where + ".vertidromes", "at least " + std::to_string(std::max<std::size_t>(min_nodes, 1)) +
                                                  " vertidromes required");
  std::set<std::string> ids;
  std::set<std::pair<double, double>> positions;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& v = nodes[i];
    const std::string p = where + ".vertidromes[" + std::to_string(i) + "]";
    if (v.id.empty()) throw ConfigError(p + ".id", "must be non-empty");
    if (!ids.insert(v.id).second) throw ConfigError(p + ".id", "duplicate vertidrome id " + v.id);
    if (!positions.insert({v.x_km, v.y_km}).second)
      throw ConfigError(p, "duplicate position for vertidrome " + v.id);
    if (v.n_fato < 1) throw ConfigError(p + ".n_fato", "must be at least 1");
    if (v.n_stands < 1) throw ConfigError(p + ".n_stands", "must be at least 1");
    if (!(v.fato_occupancy_s > 0.0)) throw ConfigError(p + ".fato_occupancy_s", "must be positive");
    if (!(v.min_separation_s > 0.0)) throw ConfigError(p + ".min_separation_s", "must be positive");
    if (!(v.charge_c_rate > 0.0)) throw ConfigError(p + ".charge_c_rate", "must be positive");
  }
  return Network(std::move(nodes));
}

Vertidrome vertidrome_from_json(const nlohmann::json& node, const std::string& where) {
  JsonReader r(node, where);
  r.only_keys({"id", "x_km", "y_km", "n_fato", "n_stands", "fato_occupancy_s", "min_separation_s",
               "charge_c_rate"});
  Vertidrome v;
  v.id = r.required<std::string>("id");
  v.x_km = r.required<double>("x_km");
  v.y_km = r.required<double>("y_km");
  v.n_fato = r.optional("n_fato", 1);
  v.n_stands = r.optional("n_stands", 2 * v.n_fato);
  v.fato_occupancy_s = r.optional("fato_occupancy_s", v.fato_occupancy_s);
  v.min_separation_s = r.optional("min_separation_s", v.min_separation_s);
  v.charge_c_rate = r.optional("charge_c_rate", v.charge_c_rate);
  return v;
}

Network network_from_json(const nlohmann::json& node, const std::string& where, std::size_t min_nodes) {
  JsonReader r(node, where);
  r.only_keys({"vertidromes"});
  if (!r.has("vertidromes")) r.fail("vertidromes", "missing required key");
  std::vector<Vertidrome> nodes;
  for (const auto& v : r.objects("vertidromes")) nodes.push_back(vertidrome_from_json(v.raw(), v.path()));
  return build_network(std::move(nodes), where, min_nodes);
}

nlohmann::json to_json(const Vertidrome& v) {
  return {{"id", v.id},
          {"x_km", v.x_km},
          {"y_km", v.y_km},
          {"n_fato", v.n_fato},
          {"n_stands", v.n_stands},
          {"fato_occupancy_s", v.fato_occupancy_s},
          {"min_separation_s", v.min_separation_s},
          {"charge_c_rate", v.charge_c_rate}};
}

nlohmann::json to_json(const Network& n) {
  auto arr = nlohmann::json::array();
  for (const auto& v : n.nodes()) arr.push_back(to_json(v));
  return {{"vertidromes", arr}};
}

}  // namespace uam::vertidrome
