#include "uam/battery/aging_calibration.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "uam/error.hpp"
#include "uam/json_reader.hpp"

namespace uam::battery {
namespace {

struct Point {
  const energy::VehicleSpec* spec = nullptr;
  std::string spec_id;
  DutyProfile profile;
  int payload = 0;
  double threshold = 0.0;
  double target = 0.0;
  double dod = 0.0;
  bool dominance = false;
};

// Scale so that the simplex works on O(1) numbers; params are squares of the
// coordinates, which keeps them non-negative.
constexpr double kScale[3] = {1e-3, 1e-3, 1e-2};

AgingParams params_at(const AgingParams& base, const double* x) {
  AgingParams p = base;
  p.alpha_cal = x[0] * x[0] * kScale[0];
  p.beta0 = x[1] * x[1] * kScale[1];
  p.beta1 = x[2] * x[2] * kScale[2];
  return p;
}

std::vector<Point> expand(const std::vector<AgingTarget>& targets, const SpecLibrary& specs,
                          const AgingCalibrationOptions& opt) {
  std::vector<Point> points;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const auto& t = targets[i];
    auto it = specs.find(t.spec);
    if (it == specs.end())
      throw CalibrationError(fmt::format("target {} references unknown spec '{}'", i, t.spec));
    if (t.min_cycles <= 0.0 || t.max_cycles < t.min_cycles)
      throw CalibrationError(fmt::format("target {} has an invalid cycle range", i));
    if (t.payload_min > t.payload_max)
      throw CalibrationError(fmt::format("target {} has an invalid payload range", i));
    const auto& spec = it->second;
    auto make = [&](int payload, double cycles) {
      Point p;
      p.spec = &spec;
      p.spec_id = t.spec;
      p.profile = design_profile(spec, payload);
      if (t.flights_per_day > 0) p.profile.flights_per_day = t.flights_per_day;
      p.payload = payload;
      p.threshold = t.threshold;
      p.target = cycles;
      energy::Mission flown = p.profile.mission;
      flown.reserve_included = false;
      p.dod = energy::mission_energy(spec, flown) / spec.capacity_nominal;
      p.dominance = p.profile.flights_per_day >= opt.dominance_min_flights_per_day &&
                    p.dod >= opt.dominance_min_dod;
      points.push_back(std::move(p));
    };
    if (t.payload_min == t.payload_max) {
      make(t.payload_max, 0.5 * (t.min_cycles + t.max_cycles));
    } else {
      make(t.payload_max, t.min_cycles);
      make(t.payload_min, t.max_cycles);
    }
  }
  return points;
}

// A deeper flight under the same threshold and duty cycle can never last longer.
void check_ordering(const std::vector<Point>& points) {
  for (const auto& a : points)
    for (const auto& b : points) {
      if (a.threshold != b.threshold || a.profile.flights_per_day != b.profile.flights_per_day) continue;
      if (a.dod > b.dod + 1e-12 && a.target > b.target)
        throw CalibrationError(fmt::format(
            "dominance violated: {} payload {} (DOD {:.3f}) targets {} cycles, more than {} payload {} "
            "(DOD {:.3f}) at {}",
            a.spec_id, a.payload, a.dod, a.target, b.spec_id, b.payload, b.dod, b.target));
    }
}

struct Evaluation {
  double objective = 0.0;
  double penalty = 0.0;
  std::vector<AgingResidual> residuals;
};

Evaluation evaluate(const std::vector<Point>& points, const AgingParams& params) {
  Evaluation ev;
  for (const auto& pt : points) {
    AgingResidual r;
    r.spec = pt.spec_id;
    r.payload = pt.payload;
    r.threshold = pt.threshold;
    r.dod = pt.dod;
    r.target = pt.target;
    // Cap the search so that near-zero params stay cheap.
    const long cap = static_cast<long>(pt.target * 20.0) + 100;
    const auto life = cycles_to_threshold(*pt.spec, params, pt.profile, pt.threshold, cap);
    r.predicted = life.fractional_cycles;
    r.relative_error = (r.predicted - r.target) / r.target;
    r.calendar_loss = life.calendar_loss;
    r.cycle_loss = life.cycle_loss;
    ev.objective += r.relative_error * r.relative_error;
    if (pt.dominance && life.calendar_loss >= life.cycle_loss) {
      const double gap = life.calendar_loss - life.cycle_loss;
      ev.penalty += 1e3 * gap * gap + 1e-6;
    }
    ev.residuals.push_back(r);
  }
  return ev;
}

struct Context {
  const std::vector<Point>* points;
  AgingParams base;
};

double objective_fn(const gsl_vector* v, void* raw) {
  auto* ctx = static_cast<Context*>(raw);
  const double x[3] = {gsl_vector_get(v, 0), gsl_vector_get(v, 1), gsl_vector_get(v, 2)};
  const auto ev = evaluate(*ctx->points, params_at(ctx->base, x));
  return ev.objective + ev.penalty;
}

struct Minimum {
  double x[3] = {0, 0, 0};
  double f = 0.0;
  int iterations = 0;
};

Minimum nelder_mead(Context& ctx, const double* start, const AgingCalibrationOptions& opt) {
  gsl_multimin_function fn{&objective_fn, 3, &ctx};
  gsl_vector* x = gsl_vector_alloc(3);
  gsl_vector* step = gsl_vector_alloc(3);
  for (int i = 0; i < 3; ++i) {
    gsl_vector_set(x, i, start[i]);
    gsl_vector_set(step, i, 0.25 * std::max(std::abs(start[i]), 0.2));
  }
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 3);
  gsl_multimin_fminimizer_set(s, &fn, x, step);
  Minimum m;
  int status = GSL_CONTINUE;
  while (status == GSL_CONTINUE && m.iterations < opt.max_iterations) {
    ++m.iterations;
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), opt.simplex_tolerance);
  }
  for (int i = 0; i < 3; ++i) m.x[i] = gsl_vector_get(s->x, i);
  m.f = s->fval;
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(step);
  gsl_vector_free(x);
  return m;
}

}  // namespace

std::vector<AgingResidual> evaluate_aging(const std::vector<AgingTarget>& targets,
                                          const SpecLibrary& specs, const AgingParams& params) {
  return evaluate(expand(targets, specs, {}), params).residuals;
}

AgingCalibration calibrate_aging(const std::vector<AgingTarget>& targets, const SpecLibrary& specs,
                                 const AgingCalibrationOptions& options) {
  if (targets.size() < 3)
    throw CalibrationError(fmt::format("need at least 3 targets, got {}", targets.size()));
  const auto points = expand(targets, specs, options);
  std::set<long> dods;
  for (const auto& p : points) dods.insert(std::lround(p.dod * 1e6));
  if (dods.size() < 2) throw CalibrationError("targets must span at least 2 distinct DODs");
  check_ordering(points);

  gsl_set_error_handler_off();
  Context ctx{&points, options.start};
  const double starts[][3] = {{1.0, 0.3, 1.0}};
  Minimum best;
  best.f = HUGE_VAL;
  int total_iterations = 0;
  for (const auto& s0 : starts) {
    auto m = nelder_mead(ctx, s0, options);
    total_iterations += m.iterations;
    if (m.f < best.f) best = m;
  }
  // Polish from the best point.
  auto polished = nelder_mead(ctx, best.x, options);
  total_iterations += polished.iterations;
  if (polished.f < best.f) best = polished;

  AgingCalibration out;
  out.params = params_at(options.start, best.x);
  const auto ev = evaluate(points, out.params);
  out.residuals = ev.residuals;
  out.objective = ev.objective;
  out.iterations = total_iterations;
  for (const auto& r : out.residuals)
    out.max_relative_error = std::max(out.max_relative_error, std::abs(r.relative_error));
  if (ev.penalty > 0.0) {
    std::string table;
    for (const auto& r : out.residuals)
      table += fmt::format("\n  {} payload {} threshold {:.2f}: target {:.0f} predicted {:.1f} ({:+.1f}%)",
                           r.spec, r.payload, r.threshold, r.target, r.predicted, 100.0 * r.relative_error);
    throw CalibrationError("constraint set infeasible: cycle loss cannot dominate calendar loss; best "
                           "attainable residuals:" + table);
  }
  return out;
}

std::vector<AgingTarget> aging_targets_from_json(const nlohmann::json& node) {
  const nlohmann::json* list = &node;
  if (node.is_object()) {
    JsonReader r(node, "");
    r.only_keys({"targets"});
    if (!r.has("targets")) r.fail("targets", "missing required key");
    list = &node.at("targets");
  }
  if (!list->is_array()) throw ConfigError("targets", "expected an array");
  std::vector<AgingTarget> out;
  for (std::size_t i = 0; i < list->size(); ++i) {
    const std::string where = fmt::format("targets[{}]", i);
    JsonReader r((*list)[i], where);
    r.only_keys({"spec", "flights_per_day", "payload", "threshold", "min_cycles", "max_cycles"});
    AgingTarget t;
    t.spec = r.required<std::string>("spec");
    t.flights_per_day = r.optional<int>("flights_per_day", 0);
    if (r.has("payload")) {
      const auto& p = r.raw().at("payload");
      if (p.is_array()) {
        if (p.size() != 2) r.fail("payload", "expected an integer or [min, max]");
        t.payload_min = JsonReader::convert<int>(p[0], r.key_path("payload"));
        t.payload_max = JsonReader::convert<int>(p[1], r.key_path("payload"));
      } else {
        t.payload_min = t.payload_max = JsonReader::convert<int>(p, r.key_path("payload"));
      }
    }
    t.threshold = r.required<double>("threshold");
    t.min_cycles = r.required<double>("min_cycles");
    t.max_cycles = r.required<double>("max_cycles");
    out.push_back(t);
  }
  return out;
}

nlohmann::json to_json(const AgingCalibration& c) {
  nlohmann::json res = nlohmann::json::array();
  for (const auto& r : c.residuals)
    res.push_back({{"spec", r.spec},
                   {"payload", r.payload},
                   {"threshold", r.threshold},
                   {"dod", r.dod},
                   {"target_cycles", r.target},
                   {"predicted_cycles", r.predicted},
                   {"relative_error", r.relative_error},
                   {"calendar_loss", r.calendar_loss},
                   {"cycle_loss", r.cycle_loss}});
  return {{"params", to_json(c.params)},
          {"residuals", res},
          {"objective", c.objective},
          {"max_relative_error", c.max_relative_error},
          {"iterations", c.iterations}};
}

}  // namespace uam::battery
