// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <evsim/net/graph.hpp>
#include <evsim/util/rng.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace evsim {

class TopologyError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Per-edge latency distribution in milliseconds.
struct LatencyModel {
    enum class Kind { kConstant, kUniform, kLognormal };

    Kind kind = Kind::kConstant;
    double a = 10.0; // constant value, uniform low, or lognormal mu
    double b = 0.0;  // uniform high or lognormal sigma

    static LatencyModel Constant(double ms) { return {Kind::kConstant, ms, 0.0}; }
    static LatencyModel Uniform(double lo, double hi) { return {Kind::kUniform, lo, hi}; }
    static LatencyModel Lognormal(double mu, double sigma) { return {Kind::kLognormal, mu, sigma}; }

    void Validate() const;
    /// One draw, rounded to whole microseconds.
    SimTime Sample(Rng& rng) const;
};

enum class TopologyKind { kWattsStrogatz, kErdosRenyi, kStar, kPath, kFullMesh, kMinerBackbone };

const char* ToString(TopologyKind k);
TopologyKind ParseTopologyKind(std::string_view s);

struct TopologySpec {
    TopologyKind kind = TopologyKind::kWattsStrogatz;
    size_t n = 0;          // node count (all kinds except miner-backbone)
    size_t k = 4;          // ring degree (watts-strogatz)
    double beta = 0.1;     // rewiring probability (watts-strogatz)
    double p = 0.1;        // edge probability (erdos-renyi)
    size_t miners = 0;     // backbone size, or miners placed at random on other kinds
    size_t observers = 0;  // miner-backbone only
    size_t attach = 1;     // miner-backbone: distinct miners each observer links to
    LatencyModel latency;
    uint64_t seed = 0;

    void Validate() const;
    size_t NodeCount() const { return kind == TopologyKind::kMinerBackbone ? miners + observers : n; }
};

/**
 * Builds the named graph. Nodes of a miner backbone are numbered miners
 * first. For other kinds, spec.miners nodes are chosen uniformly at random
 * and marked as miners. A disconnected result is joined by adding one edge
 * per extra component.
 */
NetworkGraph GenerateTopology(const TopologySpec& spec);

/// Adds the minimum number of edges to make g connected; returns that count.
size_t RepairConnectivity(NetworkGraph& g, const LatencyModel& latency, Rng& rng);

} // namespace evsim
