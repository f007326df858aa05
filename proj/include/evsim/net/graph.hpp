// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <evsim/util/types.hpp>

#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

namespace evsim {

enum class NodeRole { kMiner, kObserver };

const char* ToString(NodeRole r);

struct Edge {
    NodeId a = 0;
    NodeId b = 0;
    SimTime latency = 0; // microseconds
};

struct Neighbor {
    NodeId node = 0;
    SimTime latency = 0;
};

/// Undirected simple graph with per-edge latency and a role per node.
class NetworkGraph
{
public:
    NetworkGraph() = default;
    explicit NetworkGraph(size_t n, NodeRole role = NodeRole::kObserver);

    NodeId AddNode(NodeRole role);
    /// Throws std::invalid_argument on a self-loop or unknown node; returns
    /// false and leaves the graph unchanged for a parallel edge.
    bool AddEdge(NodeId a, NodeId b, SimTime latency);
    bool RemoveEdge(NodeId a, NodeId b);
    void SetEdgeLatency(NodeId a, NodeId b, SimTime latency);
    bool HasEdge(NodeId a, NodeId b) const;

    size_t node_count() const { return roles_.size(); }
    size_t edge_count() const { return edge_keys_.size(); }

    NodeRole role(NodeId n) const { return roles_.at(n); }
    void SetRole(NodeId n, NodeRole r) { roles_.at(n) = r; }
    std::vector<NodeId> Miners() const;

    const std::vector<Neighbor>& Neighbors(NodeId n) const { return adjacency_.at(n); }
    size_t Degree(NodeId n) const { return adjacency_.at(n).size(); }
    SimTime EdgeLatency(NodeId a, NodeId b) const;

    /// Edges with a < b, sorted.
    std::vector<Edge> Edges() const;

    /// Component label per node, labels numbered by smallest member.
    std::vector<uint32_t> Components() const;
    size_t ComponentCount() const;

    /// Hop counts from src; -1 for unreachable nodes.
    std::vector<int> HopDistances(NodeId src) const;

    /// Latency-weighted shortest paths from src; -1 for unreachable nodes.
    /// When allowed is non-empty, paths may only pass through nodes whose
    /// flag is set.
    std::vector<SimTime> ShortestLatencies(NodeId src, std::span<const char> allowed = {}) const;

private:
    static uint64_t Key(NodeId a, NodeId b);

    std::vector<NodeRole> roles_;
    std::vector<std::vector<Neighbor>> adjacency_;
    std::unordered_set<uint64_t> edge_keys_;
};

/// Mean hop distance over ordered pairs. Throws on a disconnected graph.
double AvgPathLength(const NetworkGraph& g);

/// Mean local clustering over all nodes; nodes of degree < 2 contribute 0.
double ClusteringCoefficient(const NetworkGraph& g);

/// Largest hop distance between two miners. Throws if there are none or
/// two miners are not connected.
int MinerHopDiameter(const NetworkGraph& g);

} // namespace evsim
