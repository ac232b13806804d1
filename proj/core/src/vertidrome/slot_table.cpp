#include "uam/vertidrome/slot_table.hpp"

#include <cmath>

#include "uam/error.hpp"

namespace uam::vertidrome {

SlotTable::SlotTable(int vertidrome, const Vertidrome& config, SimTime horizon)
    : vertidrome_(vertidrome),
      occupancy_(std::llround(config.fato_occupancy_s)),
      span_(std::llround(config.fato_occupancy_s + config.min_separation_s)),
      horizon_(horizon),
      fatos_(static_cast<std::size_t>(config.n_fato)) {}

SimTime SlotTable::earliest_on(int fato, SimTime t) const {
  const auto& booked = fatos_[static_cast<std::size_t>(fato)];
  // First start that could conflict with a start at t.
  auto it = booked.upper_bound(t - span_);
  for (; it != booked.end(); ++it) {
    if (it->first >= t + span_) break;
    t = it->first + span_;
  }
  return t;
}

std::optional<SlotTable::Candidate> SlotTable::probe(SimTime t_earliest) const {
  std::optional<Candidate> best;
  for (int f = 0; f < fato_count(); ++f) {
    const SimTime t = earliest_on(f, t_earliest);
    if (!best || t < best->t_start) best = Candidate{f, t};
  }
  if (!best || best->t_start > horizon_) return std::nullopt;
  return best;
}

bool SlotTable::is_free(int fato, SimTime t_start) const {
  return earliest_on(fato, t_start) == t_start;
}

Slot SlotTable::book(int fato, SimTime t_start, Movement movement, SimTime requested) {
  if (fato < 0 || fato >= fato_count()) throw DomainError("FATO index out of range");
  if (!is_free(fato, t_start)) throw DomainError("FATO slot conflicts with an existing booking");
  Slot s{vertidrome_, fato, movement, t_start, t_start + occupancy_, requested};
  fatos_[static_cast<std::size_t>(fato)].emplace(t_start, s);
  return s;
}

Slot SlotTable::request_slot(Movement movement, SimTime t_earliest) {
  auto c = probe(t_earliest);
  if (!c) throw InfeasibleError("no FATO slot before the scenario horizon");
  return book(c->fato, c->t_start, movement, t_earliest);
}

void SlotTable::release(const Slot& slot) {
  auto& booked = fatos_.at(static_cast<std::size_t>(slot.fato));
  auto it = booked.find(slot.t_start);
  if (it == booked.end()) throw DomainError("releasing a slot that is not booked");
  booked.erase(it);
}

std::size_t SlotTable::booked() const noexcept {
  std::size_t n = 0;
  for (const auto& f : fatos_) n += f.size();
  return n;
}

std::vector<Slot> SlotTable::slots() const {
  std::vector<Slot> out;
  for (const auto& f : fatos_)
    for (const auto& [t, s] : f) out.push_back(s);
  return out;
}

}  // namespace uam::vertidrome
