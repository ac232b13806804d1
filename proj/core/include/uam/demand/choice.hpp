#pragma once

#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "uam/random.hpp"

namespace uam::demand {

enum class Mode { uam, car, transit };
std::string_view to_string(Mode m);

struct ModeAlternative {
  Mode mode = Mode::uam;
  double time_min = 0.0;  // door to door
  double cost = 0.0;      // out of pocket
};

using ModeOffer = std::vector<ModeAlternative>;

struct ChoiceParams {
  double beta_time = -0.05;  // per minute
  double beta_cost = -0.1;   // per currency unit
  double asc_uam = 0.0;
  double asc_car = 0.0;
  double asc_transit = 0.0;

  double asc(Mode m) const noexcept;
};

void validate_choice(const ChoiceParams& p, const std::string& where = "choice");
ChoiceParams choice_from_json(const nlohmann::json& node, const std::string& where = "choice");
nlohmann::json to_json(const ChoiceParams& p);

// Numerically stable softmax.
std::vector<double> softmax(const std::vector<double>& utilities);

double utility(const ModeAlternative& alt, const ChoiceParams& p) noexcept;

// Probabilities aligned with `offer`. Requires at least two alternatives.
std::vector<double> mode_probabilities(const ModeOffer& offer, const ChoiceParams& p);

// Index drawn from a probability vector with one uniform variate.
std::size_t draw_index(const std::vector<double>& probabilities, Rng& rng);

}  // namespace uam::demand
