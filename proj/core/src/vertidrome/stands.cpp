#include "uam/vertidrome/stands.hpp"

#include <algorithm>
#include <utility>

#include "uam/error.hpp"

namespace uam::vertidrome {

StandManager::StandManager(int n_stands) : holder_(static_cast<std::size_t>(std::max(n_stands, 1)), -1) {}

std::optional<int> StandManager::acquire(int vehicle) {
  for (std::size_t i = 0; i < holder_.size(); ++i) {
    if (holder_[i] == -1) {
      holder_[i] = vehicle;
      ++occupied_;
      peak_ = std::max(peak_, occupied_);
      return static_cast<int>(i);
    }
  }
  queue_.push_back(vehicle);
  return std::nullopt;
}

std::optional<int> StandManager::release(int vehicle) {
  auto it = std::find(holder_.begin(), holder_.end(), vehicle);
  if (it == holder_.end()) {
    // Leaving the line without ever getting a stand.
    auto q = std::find(queue_.begin(), queue_.end(), vehicle);
    if (q == queue_.end()) throw DomainError("vehicle holds no stand");
    queue_.erase(q);
    return std::nullopt;
  }
  if (!queue_.empty()) {
    *it = queue_.front();
    queue_.pop_front();
    return *it;
  }
  *it = -1;
  --occupied_;
  return std::nullopt;
}

bool StandManager::holds(int vehicle) const {
  return std::find(holder_.begin(), holder_.end(), vehicle) != holder_.end();
}

bool StandPlan::fits(SimTime from, SimTime until) const {
  if (until < from) return true;
  // Sweep over stays overlapping [from, until]; a stay ending at e frees its
  // stand at e + 1.
  std::vector<std::pair<SimTime, int>> edges;
  int open_at_from = 0;
  for (const auto& [h, s] : stays_) {
    if (s.second < from || s.first > until) continue;
    if (s.first <= from) ++open_at_from;
    else edges.emplace_back(s.first, +1);
    if (s.second < until) edges.emplace_back(s.second + 1, -1);
  }
  if (open_at_from + 1 > capacity_) return false;
  // Releases before arrivals at the same instant.
  std::sort(edges.begin(), edges.end());
  int level = open_at_from;
  for (const auto& [t, d] : edges) {
    level += d;
    if (level + 1 > capacity_) return false;
  }
  return true;
}

std::optional<SimTime> StandPlan::next_release_after(SimTime t) const {
  std::optional<SimTime> best;
  for (const auto& [h, s] : stays_)
    if (s.second != kOpenEnd && s.second >= t && (!best || s.second < *best)) best = s.second;
  return best;
}

std::uint64_t StandPlan::add(SimTime from, SimTime until) {
  if (until < from) throw DomainError("stand stay ends before it starts");
  const auto h = next_++;
  stays_.emplace(h, std::make_pair(from, until));
  return h;
}

void StandPlan::set_until(std::uint64_t handle, SimTime until) {
  auto& s = stays_.at(handle);
  if (until < s.first) throw DomainError("stand stay ends before it starts");
  s.second = until;
}

void StandPlan::remove(std::uint64_t handle) {
  if (stays_.erase(handle) == 0) throw DomainError("unknown stand stay");
}

}  // namespace uam::vertidrome
