#include "uam/demand/choice.hpp"

#include <algorithm>
#include <cmath>

#include <boost/random/uniform_01.hpp>

#include "uam/error.hpp"
#include "uam/json_reader.hpp"

namespace uam::demand {

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::uam: return "uam";
    case Mode::car: return "car";
    case Mode::transit: return "transit";
  }
  return "?";
}

double ChoiceParams::asc(Mode m) const noexcept {
  switch (m) {
    case Mode::uam: return asc_uam;
    case Mode::car: return asc_car;
    case Mode::transit: return asc_transit;
  }
  return 0.0;
}

void validate_choice(const ChoiceParams& p, const std::string& where) {
  if (!(p.beta_time < 0.0)) throw ConfigError(where + ".beta_time", "must be negative");
  if (!(p.beta_cost < 0.0)) throw ConfigError(where + ".beta_cost", "must be negative");
}

ChoiceParams choice_from_json(const nlohmann::json& node, const std::string& where) {
  JsonReader r(node, where);
  r.only_keys({"beta_time", "beta_cost", "asc_uam", "asc_car", "asc_transit"});
  ChoiceParams p;
  p.beta_time = r.optional("beta_time", p.beta_time);
  p.beta_cost = r.optional("beta_cost", p.beta_cost);
  p.asc_uam = r.optional("asc_uam", p.asc_uam);
  p.asc_car = r.optional("asc_car", p.asc_car);
  p.asc_transit = r.optional("asc_transit", p.asc_transit);
  validate_choice(p, where);
  return p;
}

nlohmann::json to_json(const ChoiceParams& p) {
  return {{"beta_time", p.beta_time},
          {"beta_cost", p.beta_cost},
          {"asc_uam", p.asc_uam},
          {"asc_car", p.asc_car},
          {"asc_transit", p.asc_transit}};
}

std::vector<double> softmax(const std::vector<double>& u) {
  std::vector<double> out(u.size());
  if (u.empty()) return out;
  const double m = *std::max_element(u.begin(), u.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    out[i] = std::exp(u[i] - m);
    sum += out[i];
  }
  for (auto& v : out) v /= sum;
  return out;
}

double utility(const ModeAlternative& alt, const ChoiceParams& p) noexcept {
  return p.asc(alt.mode) + p.beta_time * alt.time_min + p.beta_cost * alt.cost;
}

std::vector<double> mode_probabilities(const ModeOffer& offer, const ChoiceParams& p) {
  if (offer.size() < 2) throw DomainError("mode choice needs at least two alternatives");
  std::vector<double> u;
  u.reserve(offer.size());
  for (const auto& alt : offer) {
    if (alt.time_min < 0.0 || alt.cost < 0.0) throw DomainError("mode times and costs must be non-negative");
    u.push_back(utility(alt, p));
  }
  return softmax(u);
}

std::size_t draw_index(const std::vector<double>& probabilities, Rng& rng) {
  if (probabilities.empty()) throw DomainError("no alternatives to draw from");
  const double x = boost::random::uniform_01<double>()(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    acc += probabilities[i];
    if (x < acc) return i;
  }
  return probabilities.size() - 1;
}

}  // namespace uam::demand
