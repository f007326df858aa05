// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <string_view>

namespace evsim {

enum class RelayKind { kUnicastFlood, kGossip, kMulticast, kMinerDirect };

const char* ToString(RelayKind k);
RelayKind ParseRelayKind(std::string_view s);

struct RelayStrategy {
    RelayKind kind = RelayKind::kUnicastFlood;
    uint32_t fanout = 8;           // gossip
    double overhead_ms = 0.0;      // multicast group replication delay
    uint64_t overhead_bytes = 80;  // multicast per-emission framing

    /// Throws std::invalid_argument if fanout is zero or overhead negative.
    void Validate() const;
};

/**
 * Bytes the origin transmits to hand a message of d bytes to a group of n
 * receivers: n*d for unicast flooding and miner-direct, f*d for gossip,
 * and d plus the fixed framing overhead for multicast.
 */
uint64_t SenderCost(const RelayStrategy& strategy, uint64_t n, uint64_t d);

} // namespace evsim
