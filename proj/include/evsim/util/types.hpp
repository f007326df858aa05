// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <limits>

namespace evsim {

using NodeId = uint32_t;

/// Simulated time in integer microseconds.
using SimTime = int64_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

inline constexpr SimTime kMicrosPerMilli = 1000;
inline constexpr SimTime kMicrosPerSecond = 1000000;

inline double ToMillis(SimTime t) { return static_cast<double>(t) / kMicrosPerMilli; }

} // namespace evsim
