// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <evsim/net/trace.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace evsim {

const char* ToString(MessageKind k)
{
    return k == MessageKind::kHeader ? "header" : "block";
}

std::string MessageTrace::Id() const
{
    return std::string(ToString(kind)) + ":" + hash.ToHex();
}

const MessageTrace& PropagationTrace::Find(MessageKind kind, const Hash256& hash) const
{
    for (const MessageTrace& m : messages)
        if (m.kind == kind && m.hash == hash) return m;
    throw std::out_of_range(std::string("unknown ") + ToString(kind) + " " + hash.ToHex());
}

std::optional<SimTime> TimeToFraction(const PropagationTrace& trace, const MessageTrace& msg, double p)
{
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("fraction must lie in (0, 1]");
    std::vector<SimTime> delays;
    size_t listening = 0;
    for (NodeId v = 0; v < trace.node_count(); ++v) {
        if (msg.kind == MessageKind::kBlock && trace.roles[v] != NodeRole::kMiner) continue;
        ++listening;
        if (msg.first_receipt[v] != kNever) delays.push_back(msg.first_receipt[v] - msg.origin_time);
    }
    if (listening == 0) return std::nullopt;
    // The small slack keeps 0.95 * 20 from rounding up to 20 in binary.
    const auto need = static_cast<size_t>(std::ceil(p * static_cast<double>(listening) - 1e-9));
    if (need == 0) return SimTime{0};
    if (delays.size() < need) return std::nullopt;
    std::nth_element(delays.begin(), delays.begin() + static_cast<std::ptrdiff_t>(need - 1), delays.end());
    return delays[need - 1];
}

SimTime TSecure(const PropagationTrace& trace, SimTime margin)
{
    SimTime worst = 0;
    for (const MessageTrace& m : trace.messages) {
        if (m.kind != MessageKind::kBlock) continue;
        for (NodeId v = 0; v < trace.node_count(); ++v) {
            if (trace.roles[v] != NodeRole::kMiner || m.first_receipt[v] == kNever) continue;
            worst = std::max(worst, m.first_receipt[v] - m.origin_time);
        }
    }
    return worst + margin;
}

} // namespace evsim
