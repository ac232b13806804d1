#pragma once

#include <cstdint>
#include <string_view>

#include <boost/random/mersenne_twister.hpp>

namespace uam {

using Rng = boost::random::mt19937_64;

std::uint64_t stable_hash(std::string_view text) noexcept;

// Named, independent pseudo-random sub-streams derived from one scenario seed.
// A stream's state depends only on (seed, name), so adding a consumer never
// shifts the draws seen by another.
class RandomStreams {
 public:
  explicit RandomStreams(std::uint64_t seed) noexcept : seed_(seed) {}

  Rng stream(std::string_view name) const;
  Rng stream(std::string_view name, std::uint64_t index) const;

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
};

}  // namespace uam
