#include "uam/random.hpp"

namespace uam {
namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

// FNV-1a, 64 bit.
std::uint64_t stable_hash(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Rng RandomStreams::stream(std::string_view name) const {
  return Rng(splitmix64(seed_ ^ splitmix64(stable_hash(name))));
}

Rng RandomStreams::stream(std::string_view name, std::uint64_t index) const {
  return Rng(splitmix64(splitmix64(seed_ ^ splitmix64(stable_hash(name))) + index));
}

}  // namespace uam
