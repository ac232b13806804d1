#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "uam/time.hpp"
#include "uam/vertidrome/network.hpp"

namespace uam::vertidrome {

enum class Movement { arrival, departure };

struct Slot {
  int vertidrome = 0;
  int fato = 0;
  Movement movement = Movement::departure;
  SimTime t_start = 0;
  SimTime t_end = 0;
  SimTime requested = 0;  // t_earliest of the request

  SimTime delay() const noexcept { return t_start - requested; }
};

// FATO movement schedule of one vertidrome. Two movements on one FATO must
// have starts at least occupancy + separation apart.
class SlotTable {
 public:
  SlotTable(int vertidrome, const Vertidrome& config, SimTime horizon);

  SimTime occupancy() const noexcept { return occupancy_; }
  SimTime span() const noexcept { return span_; }
  SimTime horizon() const noexcept { return horizon_; }
  int fato_count() const noexcept { return static_cast<int>(fatos_.size()); }

  struct Candidate {
    int fato = 0;
    SimTime t_start = 0;
  };

  // Earliest conflict-free start >= t_earliest over all FATOs, lowest FATO
  // on ties. Does not book. Empty when the slot would start past the horizon.
  std::optional<Candidate> probe(SimTime t_earliest) const;
  bool is_free(int fato, SimTime t_start) const;

  // Throws DomainError on a conflicting booking.
  Slot book(int fato, SimTime t_start, Movement movement, SimTime requested);
  // Probe and book. Throws InfeasibleError when the horizon is exhausted.
  Slot request_slot(Movement movement, SimTime t_earliest);
  void release(const Slot& slot);

  std::size_t booked() const noexcept;
  std::vector<Slot> slots() const;  // sorted by (fato, t_start)

 private:
  SimTime earliest_on(int fato, SimTime t) const;

  int vertidrome_;
  SimTime occupancy_;
  SimTime span_;
  SimTime horizon_;
  std::vector<std::map<SimTime, Slot>> fatos_;
};

}  // namespace uam::vertidrome
