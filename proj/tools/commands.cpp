#include "commands.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "uam/battery/aging_calibration.hpp"
#include "uam/demand/market.hpp"
#include "uam/econ/cost_model.hpp"
#include "uam/energy/calibration.hpp"
#include "uam/error.hpp"
#include "uam/json_reader.hpp"
#include "uam/report/tables.hpp"
#include "uam/sim/scenario.hpp"
#include "uam/sim/simulation.hpp"

namespace uam::cli {
namespace fs = std::filesystem;

namespace {

template <class F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const CalibrationError& e) {
    spdlog::error("calibration failed: {}", e.what());
    return kCalibration;
  } catch (const InfeasibleError& e) {
    spdlog::error("infeasible: {}", e.what());
    return kInfeasible;
  } catch (const ConfigError& e) {
    spdlog::error("{}", e.what());
    return kConfig;
  } catch (const DomainError& e) {
    spdlog::error("{}", e.what());
    return kConfig;
  } catch (const std::ios_base::failure& e) {
    spdlog::error("I/O: {}", e.what());
    return kIo;
  } catch (const fs::filesystem_error& e) {
    spdlog::error("I/O: {}", e.what());
    return kIo;
  }
}

nlohmann::json read_json_file(const std::string& path) { return parse_json(sim::read_text_file(path)); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot write " + path);
  out << text;
}

std::string specs_dir_for(const CalibrateOptions& o) {
  if (!o.specs_dir.empty()) return o.specs_dir;
  return (fs::path(o.input).parent_path() / ".." / "specs").lexically_normal().string();
}

energy::VehicleSpec load_spec(const std::string& dir, const std::string& id) {
  const auto path = (fs::path(dir) / (id + ".json")).string();
  return energy::spec_from_json(read_json_file(path), id);
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void run_one(sim::Scenario scenario, const fs::path& dir) {
  const auto start = std::chrono::steady_clock::now();
  sim::Simulation s(std::move(scenario));
  s.run_until(s.scenario().horizon_s);
  s.finish();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto scan = report::scan_run(s.scenario(), s.log());
  for (const auto& f : scan.findings()) spdlog::warn("post-run scan: {}", f);
  nlohmann::json meta{{"generated_utc", utc_now()},
                      {"wall_seconds", secs},
                      {"seed", s.scenario().seed},
                      {"log_records", s.log().size()},
                      {"scan_clean", scan.clean()}};
  report::write_run_artifacts(dir, s.scenario(), s.log(), meta);
  const auto t = report::build_tables(s.scenario(), s.log());
  const auto m = report::metrics_from_tables(t);
  spdlog::info("seed {}: {} flights, {:.2f} fh/vehicle/day, {:.1f} km mean mission, {} requests ({:.2f} s)",
               s.scenario().seed, m["flights_flown"].get<std::size_t>(),
               m["mean_flight_hours_per_vehicle_day"].get<double>(), m["mean_mission_km"].get<double>(),
               m["requests"]["total"].get<std::size_t>(), secs);
  std::cout << fmt::format("{}: {} flights, utilization {:.2f} fh/day, mean mission {:.1f} km\n", dir.string(),
                           m["flights_flown"].get<std::size_t>(), m["mean_flight_hours_per_vehicle_day"].get<double>(),
                           m["mean_mission_km"].get<double>());
}

}  // namespace

int cmd_validate(const std::string& path, bool print_resolved) {
  return guarded([&] {
    const auto s = sim::load_scenario_file(path);
    if (print_resolved) {
      std::cout << sim::serialize(s);
      return kOk;
    }
    std::cout << fmt::format("ok: {} vertidromes, {} vehicles, {} specs, {} explicit requests\n", s.network.size(),
                             s.fleet.vehicles.size(), s.fleet.specs.size(), s.demand.requests.size());
    return kOk;
  });
}

int cmd_run(const RunOptions& o) {
  return guarded([&] {
    auto base = sim::load_scenario_file(o.scenario);
    if (o.seed) base.seed = *o.seed;
    if (o.horizon) {
      if (*o.horizon < 0) throw ConfigError("--horizon", "must be non-negative");
      base.horizon_s = *o.horizon;
    }
    if (o.seeds.size() <= 1) {
      if (o.seeds.size() == 1) base.seed = o.seeds.front();
      run_one(base, o.out);
      return kOk;
    }
    // Independent seeds, one directory each.
    std::atomic<std::size_t> next{0};
    std::mutex err_mu;
    std::exception_ptr first_error;
    auto worker = [&] {
      for (std::size_t i = next++; i < o.seeds.size(); i = next++) {
        try {
          auto s = base;
          s.seed = o.seeds[i];
          run_one(std::move(s), fs::path(o.out) / fmt::format("seed-{}", o.seeds[i]));
        } catch (...) {
          std::lock_guard lock(err_mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(o.jobs, static_cast<unsigned>(o.seeds.size())));
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return kOk;
  });
}

int cmd_calibrate(const CalibrateOptions& o) {
  return guarded([&]() -> int {
    const auto input = read_json_file(o.input);
    const auto dir = specs_dir_for(o);
    nlohmann::json out;
    bool ok = true;

    if (o.which == "energy") {
      const JsonReader r(input, "anchors");
      const auto mode_name = r.required<std::string>("mode");
      energy::CalibrationMode mode;
      if (mode_name == "degradation_study") mode = energy::CalibrationMode::degradation_study;
      else if (mode_name == "payload_range") mode = energy::CalibrationMode::payload_range;
      else throw ConfigError("anchors.mode", "expected degradation_study or payload_range");
      if (!input.contains("specs") || !input["specs"].is_object() || input["specs"].empty())
        throw CalibrationError("no anchors given");
      out["mode"] = mode_name;
      for (const auto& [id, list] : input["specs"].items()) {
        const auto spec = load_spec(dir, id);
        std::vector<energy::EnergyAnchor> anchors;
        for (std::size_t i = 0; i < list.size(); ++i)
          anchors.push_back(energy::anchor_from_json(list[i], spec, fmt::format("anchors.specs.{}[{}]", id, i)));
        const auto cal = energy::calibrate_energy_model(spec, anchors, mode);
        out["specs"][id] = energy::to_json(cal, spec);
        out["fitted_specs"][id] = energy::to_json(energy::apply_calibration(spec, cal));
        std::cout << fmt::format("{} ({})\n", id, mode_name);
        for (const auto& a : cal.residuals)
          std::cout << fmt::format("  {:<32} target {:>10.4f}  fitted {:>10.4f}  residual {:+.2e}\n", a.name, a.target,
                                   a.fitted, a.residual);
        std::cout << fmt::format("  e_fixed {:.6f}  e_km_base {:.6e}  e_km_person {:.6e}  p_loiter {:.6f}\n",
                                 cal.fitted.e_fixed, cal.fitted.e_km_base, cal.fitted.e_km_person, cal.fitted.p_loiter);
        ok = ok && cal.within_tolerance;
      }
    } else if (o.which == "aging") {
      const auto targets = battery::aging_targets_from_json(input);
      battery::SpecLibrary lib;
      for (const auto& t : targets)
        if (!lib.count(t.spec)) lib.emplace(t.spec, load_spec(dir, t.spec));
      const auto start = std::chrono::steady_clock::now();
      const auto cal = battery::calibrate_aging(targets, lib);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      out = battery::to_json(cal);
      std::cout << fmt::format("{:<18} {:>4} {:>9} {:>7} {:>10} {:>10} {:>8}\n", "spec", "thr", "dod", "target",
                               "predicted", "cal/cyc", "error");
      for (const auto& r : cal.residuals)
        std::cout << fmt::format("{:<18} {:>4.2f} {:>9.4f} {:>7.0f} {:>10.1f} {:>4.3f}/{:.3f} {:>7.2f}%\n", r.spec,
                                 r.threshold, r.dod, r.target, r.predicted, r.calendar_loss, r.cycle_loss,
                                 r.relative_error * 100.0);
      std::cout << fmt::format("alpha_cal {:.4e}  beta0 {:.4e}  beta1 {:.4e}  max error {:.2f}%  ({:.2f} s)\n",
                               cal.params.alpha_cal, cal.params.beta0, cal.params.beta1,
                               cal.max_relative_error * 100.0, secs);
      ok = cal.max_relative_error <= 0.10;
    } else if (o.which == "econ") {
      const auto book = econ::cost_book_from_json(input);
      battery::AgingParams aging;
      if (!o.aging.empty()) {
        const auto a = read_json_file(o.aging);
        aging = battery::aging_from_json(a.contains("params") ? a["params"] : a, "aging");
      }
      std::cout << fmt::format("{:<16} {:<13} {:>6} {:>9} {:>10} {:>10}   band\n", "use case", "set", "km", "cycles",
                               "fare/seat", "fare/km");
      for (const auto& uc : book.use_cases) {
        const auto spec = load_spec(dir, uc.spec);
        for (const auto& set : book.sets()) {
          const auto f = econ::evaluate_use_case(uc, set, book, spec, aging);
          const bool in_band = f.fare_per_km >= uc.fare_min && f.fare_per_km <= uc.fare_max;
          ok = ok && in_band;
          std::cout << fmt::format("{:<16} {:<13} {:>6.1f} {:>9.0f} {:>10.2f} {:>10.3f}   [{:.2f}, {:.2f}] {}\n",
                                   uc.name, set, uc.distance_km, f.cycle_life, f.fare_per_seat, f.fare_per_km,
                                   uc.fare_min, uc.fare_max, in_band ? "ok" : "OUT");
          out["fares"].push_back({{"use_case", uc.name},
                                  {"set", set},
                                  {"distance_km", uc.distance_km},
                                  {"cycle_life", f.cycle_life},
                                  {"seats_sold", f.seats_sold},
                                  {"fare_per_seat", f.fare_per_seat},
                                  {"fare_per_km", f.fare_per_km},
                                  {"total_cost", f.breakdown.total},
                                  {"band", {uc.fare_min, uc.fare_max}},
                                  {"in_band", in_band}});
        }
      }
    } else {
      throw ConfigError("calibrate", "expected energy, aging or econ");
    }

    if (!o.out.empty()) write_text(o.out, out.dump(2) + "\n");
    if (!ok) {
      spdlog::error("calibration residuals outside tolerance");
      return kCalibration;
    }
    return kOk;
  });
}

int cmd_scan(const ScanOptions& o) {
  return guarded([&] {
    const auto cities = demand::cities_from_json(read_json_file(o.cities));
    demand::MarketParams market;
    if (!o.market.empty()) market = demand::market_from_json(read_json_file(o.market));
    demand::ScanGrid grid{o.prices, o.densities};
    const auto result = demand::global_scan(cities, grid, market);
    fs::create_directories(o.out);
    report::write_table(fs::path(o.out) / "demand_grid.csv", report::demand_grid_table(result));
    const auto violations = demand::monotonicity_violations(result);
    std::cout << fmt::format("{} cities, {}x{} grid\n", cities.size(), grid.prices_per_km.size(),
                             grid.densities.size());
    for (std::size_t p = 0; p < grid.prices_per_km.size(); ++p)
      for (std::size_t d = 0; d < grid.densities.size(); ++d)
        std::cout << fmt::format("  price {:>5.2f} EUR/km  density {:>5.2f}  daily trips {:>12.0f}  cities {}\n",
                                 grid.prices_per_km[p], grid.densities[d], result.totals[p][d],
                                 result.qualifying[p][d]);
    std::cout << fmt::format("best cell: price {:.2f}, density {:.2f}\n", grid.prices_per_km[result.best_price],
                             grid.densities[result.best_density]);
    if (violations.empty()) {
      std::cout << "monotonicity: ok\n";
    } else {
      std::cout << fmt::format("monotonicity: {} violations\n", violations.size());
      for (const auto& v : violations) std::cout << "  " << v << "\n";
    }
    return kOk;
  });
}

}  // namespace uam::cli
