#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "uam/demand/market.hpp"
#include "uam/report/csv.hpp"
#include "uam/sim/event_log.hpp"
#include "uam/sim/scenario.hpp"

namespace uam::report {

// The per-run CSV tables, all built from the event log.
struct RunTables {
  Table flights;
  Table requests;
  Table battery;
  Table vertidromes;
  Table costs;
};

RunTables build_tables(const sim::Scenario& scenario, const sim::EventLog& log);
Table demand_grid_table(const demand::ScanResult& r);

// Summary metrics from the tables alone.
nlohmann::ordered_json metrics_from_tables(const RunTables& t);

// Post-run safety scans over the log.
struct ScanReport {
  std::size_t fato_overlaps = 0;
  std::size_t fato_separation = 0;
  std::size_t corridor_separation = 0;
  std::size_t stand_overoccupancy = 0;
  std::size_t negative_soc_arrivals = 0;
  std::size_t reserve_violations = 0;
  std::size_t cancelled_slots_flown = 0;
  std::size_t seat_overflows = 0;
  std::size_t unterminated_requests = 0;

  bool clean() const noexcept;
  std::vector<std::string> findings() const;
};

ScanReport scan_run(const sim::Scenario& scenario, const sim::EventLog& log);

// Writes events.csv/jsonl, the run tables, metrics.json and
// resolved_config.json into dir, creating it. `metadata` is stored under the
// metrics "metadata" key when not null. Throws std::ios_base::failure.
void write_run_artifacts(const std::filesystem::path& dir, const sim::Scenario& scenario, const sim::EventLog& log,
                         const nlohmann::json& metadata = nullptr);
void write_table(const std::filesystem::path& file, const Table& t);
Table read_table(const std::filesystem::path& file);

}  // namespace uam::report
