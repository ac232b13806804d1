#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

namespace uam::vertidrome {

struct Vertidrome {
  std::string id;
  double x_km = 0.0;
  double y_km = 0.0;
  int n_fato = 1;
  int n_stands = 2;
  double fato_occupancy_s = 60.0;
  double min_separation_s = 90.0;
  double charge_c_rate = 1.0;
};

struct Route {
  int origin = 0;
  int destination = 0;
  double distance_km = 0.0;
  int corridor = 0;  // shared by both directions
};

class Network {
 public:
  Network() = default;
  explicit Network(std::vector<Vertidrome> nodes);

  std::size_t size() const noexcept { return nodes_.size(); }
  const Vertidrome& at(int index) const { return nodes_.at(static_cast<std::size_t>(index)); }
  const std::vector<Vertidrome>& nodes() const noexcept { return nodes_; }
  int index_of(const std::string& id) const;  // throws ConfigError

  Route route(int origin, int destination) const;
  double distance_km(int a, int b) const;
  int corridor_count() const noexcept { return static_cast<int>(size() * (size() - 1) / 2); }
  // Direction flag of travel on the route's corridor: 0 from lower to higher
  // index, 1 otherwise.
  static int direction(int origin, int destination) noexcept { return origin < destination ? 0 : 1; }

  // Vertidrome closest to a point; ties go to the lower index.
  int nearest(double x_km, double y_km) const;

 private:
  std::vector<Vertidrome> nodes_;
  std::unordered_map<std::string, int> index_;
};

// Validates counts and distinct positions and ids. Throws ConfigError.
// Scenarios may hold a single vertidrome (no routes) by lowering min_nodes.
Network build_network(std::vector<Vertidrome> nodes, const std::string& where = "network",
                      std::size_t min_nodes = 2);

Vertidrome vertidrome_from_json(const nlohmann::json& node, const std::string& where);
Network network_from_json(const nlohmann::json& node, const std::string& where = "network",
                          std::size_t min_nodes = 2);
nlohmann::json to_json(const Vertidrome& v);
nlohmann::json to_json(const Network& n);

}  // namespace uam::vertidrome
