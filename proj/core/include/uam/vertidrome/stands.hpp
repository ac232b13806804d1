#pragma once

#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "uam/time.hpp"

namespace uam::vertidrome {

// Live stand occupancy with a FIFO waiting line.
class StandManager {
 public:
  explicit StandManager(int n_stands);

  // Stand index when granted; empty when the vehicle had to queue.
  std::optional<int> acquire(int vehicle);
  // Frees the vehicle's stand. When someone waits, the stand passes to the
  // head of the line, whose id is returned.
  std::optional<int> release(int vehicle);

  bool holds(int vehicle) const;
  int occupied() const noexcept { return occupied_; }
  int capacity() const noexcept { return static_cast<int>(holder_.size()); }
  int peak() const noexcept { return peak_; }
  std::size_t waiting() const noexcept { return queue_.size(); }

 private:
  std::vector<int> holder_;  // -1 when free
  std::deque<int> queue_;
  int occupied_ = 0;
  int peak_ = 0;
};

inline constexpr SimTime kOpenEnd = std::numeric_limits<SimTime>::max();

// Planned stays used when scheduling, so that no flight is committed to a
// destination whose stands are all spoken for. A stay holds its stand from
// `from` through the second `until`, so an arrival never depends on a
// departure at the same tick.
class StandPlan {
 public:
  explicit StandPlan(int n_stands) : capacity_(n_stands) {}

  // True when adding a stay [from, until] keeps every instant at or below capacity.
  bool fits(SimTime from, SimTime until) const;
  // Smallest finite stay end >= t, if any.
  std::optional<SimTime> next_release_after(SimTime t) const;
  std::uint64_t add(SimTime from, SimTime until);
  void set_until(std::uint64_t handle, SimTime until);
  void remove(std::uint64_t handle);
  SimTime from_of(std::uint64_t handle) const { return stays_.at(handle).first; }
  SimTime until_of(std::uint64_t handle) const { return stays_.at(handle).second; }
  int capacity() const noexcept { return capacity_; }
  std::size_t size() const noexcept { return stays_.size(); }

 private:
  int capacity_;
  std::uint64_t next_ = 1;
  std::map<std::uint64_t, std::pair<SimTime, SimTime>> stays_;
};

}  // namespace uam::vertidrome
