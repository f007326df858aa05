// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <evsim/chain/hash.hpp>
#include <evsim/net/graph.hpp>
#include <evsim/util/types.hpp>

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace evsim {

enum class MessageKind { kHeader, kBlock };

const char* ToString(MessageKind k);

inline constexpr SimTime kNever = -1;

struct MessageTrace {
    MessageKind kind = MessageKind::kHeader;
    Hash256 hash;
    NodeId origin = 0;
    uint64_t size_bytes = 0;
    SimTime origin_time = 0;
    std::vector<SimTime> first_receipt; // per node, kNever if not reached

    /// "header:<hex>" or "block:<hex>".
    std::string Id() const;
};

/**
 * Per-message first receipts plus bytes sent. flows[{i, j}] counts bytes
 * sent from i to j; a multicast emission is booked once as flows[{i, i}].
 */
struct PropagationTrace {
    std::vector<NodeRole> roles;
    std::vector<MessageTrace> messages;
    std::vector<uint64_t> bytes_sent;
    std::map<std::pair<NodeId, NodeId>, uint64_t> flows;

    size_t node_count() const { return roles.size(); }
    /// Throws std::out_of_range when no such message was traced.
    const MessageTrace& Find(MessageKind kind, const Hash256& hash) const;
};

/**
 * Earliest delay after origin_time by which at least a fraction p of the
 * listening nodes hold the message. Every node listens for headers; only
 * miners listen for blocks. The origin counts as holding the message at
 * delay zero. Returns nullopt if that fraction was never reached.
 */
std::optional<SimTime> TimeToFraction(const PropagationTrace& trace, const MessageTrace& msg, double p);

/// Largest miner first-receipt delay over all block messages, plus margin.
SimTime TSecure(const PropagationTrace& trace, SimTime margin);

} // namespace evsim
