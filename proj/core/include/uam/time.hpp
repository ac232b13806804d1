#pragma once

#include <cstdint>

namespace uam {

// Whole seconds since scenario start.
using SimTime = std::int64_t;

inline constexpr SimTime kMinute = 60;
inline constexpr SimTime kHour = 3600;
inline constexpr SimTime kDay = 86400;

}  // namespace uam
