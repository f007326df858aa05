// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <evsim/net/relay.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace evsim {

const char* ToString(RelayKind k)
{
    switch (k) {
    case RelayKind::kUnicastFlood: return "unicast-flood";
    case RelayKind::kGossip: return "gossip";
    case RelayKind::kMulticast: return "multicast";
    case RelayKind::kMinerDirect: return "miner-direct";
    }
    return "unknown";
}

RelayKind ParseRelayKind(std::string_view s)
{
    if (s == "unicast-flood" || s == "unicast" || s == "flood") return RelayKind::kUnicastFlood;
    if (s == "gossip") return RelayKind::kGossip;
    if (s == "multicast") return RelayKind::kMulticast;
    if (s == "miner-direct") return RelayKind::kMinerDirect;
    throw std::invalid_argument("unknown relay strategy '" + std::string(s) + "'");
}

void RelayStrategy::Validate() const
{
    if (fanout < 1) throw std::invalid_argument("relay.fanout must be at least 1");
    if (!(overhead_ms >= 0.0) || !std::isfinite(overhead_ms)) throw std::invalid_argument("relay.overhead_ms must be non-negative");
}

uint64_t SenderCost(const RelayStrategy& strategy, uint64_t n, uint64_t d)
{
    if (n < 1 || d < 1) throw std::invalid_argument("sender cost needs n >= 1 and d >= 1");
    switch (strategy.kind) {
    case RelayKind::kUnicastFlood:
    case RelayKind::kMinerDirect: return n * d;
    case RelayKind::kGossip: return static_cast<uint64_t>(strategy.fanout) * d;
    case RelayKind::kMulticast: return d + strategy.overhead_bytes;
    }
    return 0;
}

} // namespace evsim
