#include "uam/sim/event_log.hpp"

#include <array>
#include <istream>
#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "uam/error.hpp"
#include "uam/json_reader.hpp"

namespace uam::sim {
namespace {

constexpr std::array<std::string_view, 20> kRecordNames = {
    "RequestArrival", "FlightDeparture", "FlightArrival",   "ChargeComplete", "BatteryReplaced",
    "StandAcquired",  "StandReleased",   "RepositionDispatched", "CalendarAging", "PoolCheck",
    "FlightScheduled", "OfferMade",      "RequestOutcome",  "FlightCommitted", "FlightCancelled",
    "SlotGranted",    "SlotReleased",    "ApronCongestion", "Anomaly",         "RunEnd",
};

constexpr std::array<std::string_view, static_cast<std::size_t>(Field::kCount)> kFieldNames = {
    "vehicle",        "flight",          "request",          "origin",         "destination",
    "passengers",     "seats_fixed",     "seats_capacity",   "distance_km",    "trip_km",
    "t_min",          "t_max",           "t_dep",            "t_arr",          "soc_before",
    "soc_after",      "capacity_before", "capacity_after",   "energy_used",    "dod",
    "vertidrome",     "fato",            "movement",         "slot_start",     "slot_delay_s",
    "stand",          "stand_occupancy", "queue_length",     "corridor",       "ground_delay_s",
    "outcome",        "reason",          "mode",             "p_uam",          "fare_per_seat",
    "fare_per_km",    "revenue",         "cost_energy",      "cost_battery",   "cost_maintenance",
    "cost_crew",      "cost_capital",    "cost_insurance",   "cost_fees",      "cost_indirect",
    "cost_total",     "block_hours",     "use_case",         "reposition",     "charge_duration_s",
    "age_days",       "flight_cycles",   "throughput_fec",   "cycle_life",     "day",
    "message",
};

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string_view to_string(RecordKind k) { return kRecordNames[static_cast<std::size_t>(k)]; }

RecordKind record_kind_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kRecordNames.size(); ++i)
    if (kRecordNames[i] == name) return static_cast<RecordKind>(i);
  throw ConfigError("kind", "unknown record kind " + std::string(name));
}

RecordKind record_kind(EventKind k) noexcept {
  // The first eight record kinds mirror EventKind.
  return static_cast<RecordKind>(static_cast<int>(k));
}

std::string_view to_string(Field f) { return kFieldNames[static_cast<std::size_t>(f)]; }

std::optional<Field> field_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kFieldNames.size(); ++i)
    if (kFieldNames[i] == name) return static_cast<Field>(i);
  return std::nullopt;
}

const Value* Record::find(Field f) const noexcept {
  for (const auto& [k, v] : fields)
    if (k == f) return &v;
  return nullptr;
}

std::int64_t Record::integer(Field f) const {
  const auto* v = find(f);
  if (!v || !std::holds_alternative<std::int64_t>(*v))
    throw DomainError(fmt::format("record {} has no integer field {}", id, to_string(f)));
  return std::get<std::int64_t>(*v);
}

double Record::number(Field f) const {
  const auto* v = find(f);
  if (v && std::holds_alternative<double>(*v)) return std::get<double>(*v);
  if (v && std::holds_alternative<std::int64_t>(*v)) return static_cast<double>(std::get<std::int64_t>(*v));
  throw DomainError(fmt::format("record {} has no numeric field {}", id, to_string(f)));
}

const std::string& Record::text(Field f) const {
  const auto* v = find(f);
  if (!v || !std::holds_alternative<std::string>(*v))
    throw DomainError(fmt::format("record {} has no text field {}", id, to_string(f)));
  return std::get<std::string>(*v);
}

std::string format_value(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return fmt::format("{}", *i);
  if (const auto* d = std::get_if<double>(&v)) return fmt::format("{}", *d);
  return std::get<std::string>(v);
}

Record& EventLog::append(SimTime t, RecordKind kind) {
  Record r;
  r.id = records_.size();
  r.t = t;
  r.kind = kind;
  records_.push_back(std::move(r));
  return records_.back();
}

void EventLog::write_ndjson(std::ostream& out) const {
  for (const auto& r : records_) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["t"] = r.t;
    j["kind"] = std::string(to_string(r.kind));
    for (const auto& [f, v] : r.fields) {
      const std::string key(to_string(f));
      std::visit([&](const auto& x) { j[key] = x; }, v);
    }
    out << j.dump() << '\n';
  }
}

void EventLog::write_csv(std::ostream& out) const {
  out << "id,t,kind";
  for (std::size_t i = 0; i < kFieldNames.size(); ++i) out << ',' << kFieldNames[i];
  out << "\r\n";
  std::array<const Value*, kFieldNames.size()> row{};
  for (const auto& r : records_) {
    row.fill(nullptr);
    for (const auto& [f, v] : r.fields) row[static_cast<std::size_t>(f)] = &v;
    out << r.id << ',' << r.t << ',' << to_string(r.kind);
    for (const auto* v : row) {
      out << ',';
      if (v) out << csv_escape(format_value(*v));
    }
    out << "\r\n";
  }
}

EventLog EventLog::read_ndjson(std::istream& in) {
  EventLog log;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = parse_json(line);
    } catch (const ParseError& e) {
      throw ParseError(line_no, e.column(), e.what());
    }
    const std::string where = fmt::format("line {}", line_no);
    if (!j.is_object()) throw ConfigError(where, "expected an object");
    Record r;
    r.id = JsonReader::convert<std::uint64_t>(j.at("id"), where + ".id");
    r.t = JsonReader::convert<std::int64_t>(j.at("t"), where + ".t");
    r.kind = record_kind_from_string(JsonReader::convert<std::string>(j.at("kind"), where + ".kind"));
    for (const auto& item : j.items()) {
      if (item.key() == "id" || item.key() == "t" || item.key() == "kind") continue;
      auto f = field_from_string(item.key());
      if (!f) throw ConfigError(where + "." + item.key(), "unknown field");
      const auto& v = item.value();
      if (v.is_number_integer()) r.fields.emplace_back(*f, v.get<std::int64_t>());
      else if (v.is_number()) r.fields.emplace_back(*f, v.get<double>());
      else if (v.is_string()) r.fields.emplace_back(*f, v.get<std::string>());
      else throw ConfigError(where + "." + item.key(), "expected a number or string");
    }
    if (r.id != log.records_.size()) throw ConfigError(where + ".id", "records out of sequence");
    log.records_.push_back(std::move(r));
  }
  return log;
}

}  // namespace uam::sim
