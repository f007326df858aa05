// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace evsim {

std::string ToHex(std::span<const uint8_t> bytes);

/// Parses an even-length hex string. Throws std::invalid_argument on bad input.
std::vector<uint8_t> ParseHex(std::string_view hex);

} // namespace evsim
