#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "commands.hpp"

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("uam_sim");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("UAM_SIM_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to off; only accept real ones.
    if (level != spdlog::level::off || std::string_view(env) == "off") spdlog::set_level(level);
    else spdlog::warn("UAM_SIM_LOG={} not recognized", env);
  }
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  using namespace uam::cli;

  CLI::App app{"uam_sim: fast-time urban air mobility simulator"};
  app.require_subcommand(1);

  std::string validate_path;
  bool print_resolved = false;
  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("scenario", validate_path, "Scenario JSON")->required();
  validate->add_flag("--print-resolved", print_resolved, "Print the scenario with every default filled in");

  RunOptions run_opts;
  std::uint64_t seed = 0;
  std::int64_t horizon = 0;
  auto* run = app.add_subcommand("run", "Simulate a scenario and write run artifacts");
  run->add_option("scenario", run_opts.scenario, "Scenario JSON")->required();
  auto* seed_opt = run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--seeds", run_opts.seeds, "Several seeds, one output sub-directory each")->delimiter(',');
  run->add_option("--out", run_opts.out, "Output directory")->capture_default_str();
  auto* horizon_opt = run->add_option("--horizon", horizon, "Override the horizon in seconds");
  run->add_option("--jobs", run_opts.jobs, "Parallel runs when several seeds are given")->capture_default_str();

  CalibrateOptions cal_opts;
  auto* calibrate = app.add_subcommand("calibrate", "Fit model parameters to targets");
  calibrate->add_option("which", cal_opts.which, "energy, aging or econ")
      ->required()
      ->check(CLI::IsMember({"energy", "aging", "econ"}));
  calibrate->add_option("input", cal_opts.input, "Anchors, targets or cost file")->required();
  calibrate->add_option("--specs", cal_opts.specs_dir, "Vehicle spec directory (default: ../specs next to input)");
  calibrate->add_option("--aging", cal_opts.aging, "Aging parameters for econ");
  calibrate->add_option("--out", cal_opts.out, "Write the fitted parameters here");

  ScanOptions scan_opts;
  auto* scan = app.add_subcommand("scan", "Evaluate the city demand grid");
  scan->add_option("cities", scan_opts.cities, "City list JSON")->required();
  scan->add_option("--market", scan_opts.market, "Market parameter JSON");
  scan->add_option("--prices", scan_opts.prices, "Price levels, EUR/km, low to high")->delimiter(',');
  scan->add_option("--densities", scan_opts.densities, "Vertiport density levels, low to high")->delimiter(',');
  scan->add_option("--out", scan_opts.out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfig;
  }

  if (*validate) return cmd_validate(validate_path, print_resolved);
  if (*run) {
    if (*seed_opt) run_opts.seed = seed;
    if (*horizon_opt) run_opts.horizon = horizon;
    return cmd_run(run_opts);
  }
  if (*calibrate) return cmd_calibrate(cal_opts);
  if (*scan) return cmd_scan(scan_opts);
  return kConfig;
}
