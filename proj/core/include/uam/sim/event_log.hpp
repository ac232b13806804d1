#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "uam/sim/event_queue.hpp"
#include "uam/time.hpp"

namespace uam::sim {

// Everything the log can hold: the queued event kinds plus pipeline and
// bookkeeping records.
enum class RecordKind {
  RequestArrival,
  FlightDeparture,
  FlightArrival,
  ChargeComplete,
  BatteryReplaced,
  StandAcquired,
  StandReleased,
  RepositionDispatched,
  CalendarAging,
  PoolCheck,
  FlightScheduled,
  OfferMade,
  RequestOutcome,
  FlightCommitted,
  FlightCancelled,
  SlotGranted,
  SlotReleased,
  ApronCongestion,
  Anomaly,
  RunEnd,  // one per vehicle at the end of a run
};

std::string_view to_string(RecordKind k);
RecordKind record_kind_from_string(std::string_view name);
RecordKind record_kind(EventKind k) noexcept;

// Payload fields; the order here is the events.csv column order.
enum class Field {
  vehicle,
  flight,
  request,
  origin,
  destination,
  passengers,
  seats_fixed,
  seats_capacity,
  distance_km,
  trip_km,
  t_min,
  t_max,
  t_dep,
  t_arr,
  soc_before,
  soc_after,
  capacity_before,
  capacity_after,
  energy_used,
  dod,
  vertidrome,
  fato,
  movement,
  slot_start,
  slot_delay_s,
  stand,
  stand_occupancy,
  queue_length,
  corridor,
  ground_delay_s,
  outcome,
  reason,
  mode,
  p_uam,
  fare_per_seat,
  fare_per_km,
  revenue,
  cost_energy,
  cost_battery,
  cost_maintenance,
  cost_crew,
  cost_capital,
  cost_insurance,
  cost_fees,
  cost_indirect,
  cost_total,
  block_hours,
  use_case,
  reposition,
  charge_duration_s,
  age_days,
  flight_cycles,
  throughput_fec,
  cycle_life,
  day,
  message,
  kCount
};

std::string_view to_string(Field f);
std::optional<Field> field_from_string(std::string_view name);

using Value = std::variant<std::int64_t, double, std::string>;

struct Record {
  std::uint64_t id = 0;
  SimTime t = 0;
  RecordKind kind = RecordKind::Anomaly;
  std::vector<std::pair<Field, Value>> fields;

  const Value* find(Field f) const noexcept;
  bool has(Field f) const noexcept { return find(f) != nullptr; }
  std::int64_t integer(Field f) const;  // throws DomainError when absent
  double number(Field f) const;         // integers widen
  const std::string& text(Field f) const;
};

// Shortest round-trip decimal form used in every text export.
std::string format_value(const Value& v);

class EventLog {
 public:
  Record& append(SimTime t, RecordKind kind);
  const std::vector<Record>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }

  void write_ndjson(std::ostream& out) const;
  void write_csv(std::ostream& out) const;
  // Inverse of write_ndjson. Throws ParseError / ConfigError.
  static EventLog read_ndjson(std::istream& in);

 private:
  std::vector<Record> records_;
};

// Fluent helper: log.append(t, kind) returns the record; `put` adds fields.
inline Record& put(Record& r, Field f, Value v) {
  r.fields.emplace_back(f, std::move(v));
  return r;
}

}  // namespace uam::sim
