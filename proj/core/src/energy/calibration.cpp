#include "uam/energy/calibration.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "uam/error.hpp"
#include "uam/json_reader.hpp"

namespace uam::energy {
namespace {

struct Row {
  double fixed_coef = 0.0;  // multiplies e_fixed
  double km_coef = 0.0;     // multiplies e_km_base
  double rhs = 0.0;
};

Row anchor_row(const VehicleSpec& spec, const EnergyAnchor& a, double loiter_ratio,
               double person_ratio) {
  const double reserve_coef = spec.reserve_loiter_min * loiter_ratio;
  const double c0 = spec.capacity_nominal;
  switch (a.kind) {
    case EnergyAnchor::Kind::mission: {
      const double km = a.mission.total_distance_km();
      return {static_cast<double>(a.mission.legs.size()) +
                  (a.mission.reserve_included ? reserve_coef : 0.0),
              km * (1.0 + person_ratio * a.mission.payload), a.target * c0};
    }
    case EnergyAnchor::Kind::reserve:
      return {reserve_coef, 0.0, a.target * c0};
    case EnergyAnchor::Kind::range:
      return {1.0 + reserve_coef, a.range_km * (1.0 + person_ratio * a.payload),
              a.capacity_fraction * c0};
  }
  return {};
}

bool belongs_to(EnergyAnchor::Kind kind, CalibrationMode mode) {
  if (mode == CalibrationMode::payload_range) return kind == EnergyAnchor::Kind::range;
  return kind != EnergyAnchor::Kind::range;
}

// Exact NNLS for two unknowns: the optimum lies on one of the four supports.
Eigen::Vector2d nnls2(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  Eigen::Vector2d best = Eigen::Vector2d::Zero();
  double best_cost = b.squaredNorm();
  auto consider = [&](const Eigen::Vector2d& x) {
    if (x(0) < 0.0 || x(1) < 0.0) return;
    const double cost = (a * x - b).squaredNorm();
    if (cost < best_cost) {
      best_cost = cost;
      best = x;
    }
  };
  consider(a.colPivHouseholderQr().solve(b));
  for (int j = 0; j < 2; ++j) {
    const double norm = a.col(j).squaredNorm();
    if (norm <= 0.0) continue;
    Eigen::Vector2d x = Eigen::Vector2d::Zero();
    x(j) = a.col(j).dot(b) / norm;
    consider(x);
  }
  return best;
}

}  // namespace

std::string_view to_string(CalibrationMode mode) {
  return mode == CalibrationMode::payload_range ? "payload_range" : "degradation_study";
}

EnergyCalibration calibrate_energy_model(const VehicleSpec& spec,
                                         const std::vector<EnergyAnchor>& anchors,
                                         CalibrationMode mode, const CalibrationOptions& options) {
  if (anchors.size() < 2)
    throw CalibrationError("underdetermined: " + std::to_string(anchors.size()) +
                           " anchor(s) for two free coefficients (e_fixed, e_km)");
  for (const auto& a : anchors) {
    if (!belongs_to(a.kind, mode))
      throw CalibrationError("anchor '" + a.name + "' does not belong to mode " +
                             std::string(to_string(mode)));
  }

  const double person_ratio = spec.energy.e_km_base > 0.0
                                  ? spec.energy.e_km_person / spec.energy.e_km_base
                                  : options.fallback_person_ratio;

  Eigen::MatrixXd a(static_cast<Eigen::Index>(anchors.size()), 2);
  Eigen::VectorXd b(static_cast<Eigen::Index>(anchors.size()));
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const Row row = anchor_row(spec, anchors[i], options.loiter_ratio, person_ratio);
    a(static_cast<Eigen::Index>(i), 0) = row.fixed_coef;
    a(static_cast<Eigen::Index>(i), 1) = row.km_coef;
    b(static_cast<Eigen::Index>(i)) = row.rhs;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = 1e-10 * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  if (rank < 2) {
    std::ostringstream msg;
    msg << "underdetermined: anchors have rank " << rank << "; free direction(s):";
    for (Eigen::Index c = rank; c < 2; ++c) {
      msg << " (" << svd.matrixV()(0, c) << " e_fixed, " << svd.matrixV()(1, c) << " e_km_base)";
    }
    throw CalibrationError(msg.str());
  }

  const Eigen::Vector2d x = nnls2(a, b);

  EnergyCalibration out;
  out.spec_id = spec.id;
  out.mode = mode;
  out.anchors = anchors;
  out.person_ratio = person_ratio;
  out.fitted.e_fixed = x(0);
  out.fitted.p_loiter = options.loiter_ratio * x(0);
  out.fitted.e_km_base = x(1);
  out.fitted.e_km_person = person_ratio * x(1);

  VehicleSpec fitted = apply_calibration(spec, out);
  out.residuals = evaluate_anchors(fitted, anchors);
  for (const auto& r : out.residuals)
    out.max_abs_residual = std::max(out.max_abs_residual, std::abs(r.residual));
  // Range anchors carry residuals in km; scale to energy for the tolerance check.
  double worst_energy = 0.0;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const Row row = anchor_row(fitted, anchors[i], options.loiter_ratio, person_ratio);
    worst_energy = std::max(worst_energy, std::abs(row.fixed_coef * x(0) + row.km_coef * x(1) - row.rhs));
  }
  out.within_tolerance = worst_energy <= options.tolerance;
  return out;
}

VehicleSpec apply_calibration(VehicleSpec spec, const EnergyCalibration& calibration) {
  spec.energy = calibration.fitted;
  return spec;
}

std::vector<AnchorResidual> evaluate_anchors(const VehicleSpec& spec,
                                             const std::vector<EnergyAnchor>& anchors) {
  std::vector<AnchorResidual> out;
  out.reserve(anchors.size());
  for (const auto& a : anchors) {
    AnchorResidual r;
    r.name = a.name;
    switch (a.kind) {
      case EnergyAnchor::Kind::mission:
        r.target = a.target;
        r.fitted = mission_energy(spec, a.mission) / spec.capacity_nominal;
        break;
      case EnergyAnchor::Kind::reserve:
        r.target = a.target;
        r.fitted = reserve_energy(spec) / spec.capacity_nominal;
        break;
      case EnergyAnchor::Kind::range:
        r.target = a.range_km;
        r.fitted = payload_range(spec, a.capacity_fraction, a.payload);
        break;
    }
    r.residual = r.fitted - r.target;
    out.push_back(r);
  }
  return out;
}

EnergyAnchor anchor_from_json(const nlohmann::json& node, const VehicleSpec& spec,
                              const std::string& where) {
  JsonReader r(node, where);
  EnergyAnchor a;
  a.name = r.required<std::string>("name");
  const auto kind = r.required<std::string>("kind");
  if (kind == "design_mission") {
    r.only_keys({"name", "kind", "payload", "reserve_included", "target"});
    a.kind = EnergyAnchor::Kind::mission;
    a.mission = design_mission(spec, r.optional("payload", spec.max_payload_persons),
                               r.optional("reserve_included", true));
    a.target = r.required<double>("target");
  } else if (kind == "mission") {
    r.only_keys({"name", "kind", "legs_km", "payload", "reserve_included", "target"});
    a.kind = EnergyAnchor::Kind::mission;
    for (double d : r.required<std::vector<double>>("legs_km")) a.mission.legs.push_back(Leg{"", "", d});
    if (a.mission.legs.empty()) r.fail("legs_km", "at least one leg required");
    a.mission.payload = r.optional("payload", spec.max_payload_persons);
    a.mission.reserve_included = r.optional("reserve_included", true);
    a.target = r.required<double>("target");
  } else if (kind == "reserve") {
    r.only_keys({"name", "kind", "target"});
    a.kind = EnergyAnchor::Kind::reserve;
    a.target = r.required<double>("target");
  } else if (kind == "range") {
    r.only_keys({"name", "kind", "capacity_fraction", "payload", "range_km"});
    a.kind = EnergyAnchor::Kind::range;
    a.capacity_fraction = r.required<double>("capacity_fraction");
    a.payload = r.optional("payload", spec.max_payload_persons);
    a.range_km = r.required<double>("range_km");
  } else {
    r.fail("kind", "expected design_mission, mission, reserve or range");
  }
  return a;
}

nlohmann::json to_json(const EnergyCalibration& c, const VehicleSpec& spec) {
  auto residuals = nlohmann::json::array();
  for (const auto& r : c.residuals)
    residuals.push_back({{"name", r.name}, {"target", r.target}, {"fitted", r.fitted}, {"residual", r.residual}});
  return nlohmann::json{
      {"spec", c.spec_id},
      {"mode", std::string(to_string(c.mode))},
      {"fitted",
       {{"e_fixed", c.fitted.e_fixed},
        {"e_km_base", c.fitted.e_km_base},
        {"e_km_person", c.fitted.e_km_person},
        {"p_loiter", c.fitted.p_loiter}}},
      {"person_ratio", c.person_ratio},
      {"per_km_full_payload", c.aggregate_per_km(spec.max_payload_persons)},
      {"fixed_total_with_reserve", c.fixed_total_with_reserve(spec.reserve_loiter_min)},
      {"residuals", residuals},
      {"max_abs_residual", c.max_abs_residual},
      {"within_tolerance", c.within_tolerance},
  };
}

}  // namespace uam::energy
