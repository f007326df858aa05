// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <evsim/net/graph.hpp>

#include <algorithm>
#include <deque>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>

namespace evsim {

const char* ToString(NodeRole r)
{
    return r == NodeRole::kMiner ? "miner" : "observer-spv";
}

NetworkGraph::NetworkGraph(size_t n, NodeRole role) : roles_(n, role), adjacency_(n) {}

NodeId NetworkGraph::AddNode(NodeRole role)
{
    roles_.push_back(role);
    adjacency_.emplace_back();
    return static_cast<NodeId>(roles_.size() - 1);
}

uint64_t NetworkGraph::Key(NodeId a, NodeId b)
{
    if (a > b) std::swap(a, b);
    return (static_cast<uint64_t>(a) << 32) | b;
}

bool NetworkGraph::AddEdge(NodeId a, NodeId b, SimTime latency)
{
    if (a == b) throw std::invalid_argument("self-loop on node " + std::to_string(a));
    if (a >= node_count() || b >= node_count()) throw std::invalid_argument("edge references an unknown node");
    if (latency < 0) throw std::invalid_argument("negative edge latency");
    if (!edge_keys_.insert(Key(a, b)).second) return false;
    adjacency_[a].push_back({b, latency});
    adjacency_[b].push_back({a, latency});
    return true;
}

bool NetworkGraph::RemoveEdge(NodeId a, NodeId b)
{
    if (!edge_keys_.erase(Key(a, b))) return false;
    auto drop = [](std::vector<Neighbor>& list, NodeId x) {
        list.erase(std::find_if(list.begin(), list.end(), [x](const Neighbor& n) { return n.node == x; }));
    };
    drop(adjacency_[a], b);
    drop(adjacency_[b], a);
    return true;
}

void NetworkGraph::SetEdgeLatency(NodeId a, NodeId b, SimTime latency)
{
    if (!HasEdge(a, b)) throw std::out_of_range("no edge " + std::to_string(a) + "-" + std::to_string(b));
    for (Neighbor& n : adjacency_[a])
        if (n.node == b) n.latency = latency;
    for (Neighbor& n : adjacency_[b])
        if (n.node == a) n.latency = latency;
}

bool NetworkGraph::HasEdge(NodeId a, NodeId b) const
{
    return edge_keys_.count(Key(a, b)) != 0;
}

std::vector<NodeId> NetworkGraph::Miners() const
{
    std::vector<NodeId> out;
    for (NodeId i = 0; i < roles_.size(); ++i)
        if (roles_[i] == NodeRole::kMiner) out.push_back(i);
    return out;
}

SimTime NetworkGraph::EdgeLatency(NodeId a, NodeId b) const
{
    for (const Neighbor& n : adjacency_.at(a))
        if (n.node == b) return n.latency;
    throw std::out_of_range("no edge " + std::to_string(a) + "-" + std::to_string(b));
}

std::vector<Edge> NetworkGraph::Edges() const
{
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeId a = 0; a < adjacency_.size(); ++a)
        for (const Neighbor& n : adjacency_[a])
            if (a < n.node) out.push_back({a, n.node, n.latency});
    std::sort(out.begin(), out.end(), [](const Edge& x, const Edge& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
    return out;
}

std::vector<uint32_t> NetworkGraph::Components() const
{
    const uint32_t unset = UINT32_MAX;
    std::vector<uint32_t> label(node_count(), unset);
    uint32_t next = 0;
    for (NodeId s = 0; s < node_count(); ++s) {
        if (label[s] != unset) continue;
        std::deque<NodeId> q{s};
        label[s] = next;
        while (!q.empty()) {
            const NodeId u = q.front();
            q.pop_front();
            for (const Neighbor& n : adjacency_[u]) {
                if (label[n.node] == unset) {
                    label[n.node] = next;
                    q.push_back(n.node);
                }
            }
        }
        ++next;
    }
    return label;
}

size_t NetworkGraph::ComponentCount() const
{
    const auto label = Components();
    return label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
}

std::vector<int> NetworkGraph::HopDistances(NodeId src) const
{
    std::vector<int> dist(node_count(), -1);
    std::deque<NodeId> q{src};
    dist.at(src) = 0;
    while (!q.empty()) {
        const NodeId u = q.front();
        q.pop_front();
        for (const Neighbor& n : adjacency_[u]) {
            if (dist[n.node] < 0) {
                dist[n.node] = dist[u] + 1;
                q.push_back(n.node);
            }
        }
    }
    return dist;
}

std::vector<SimTime> NetworkGraph::ShortestLatencies(NodeId src, std::span<const char> allowed) const
{
    std::vector<SimTime> dist(node_count(), -1);
    using Item = std::pair<SimTime, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist.at(src) = 0;
    pq.push({0, src});
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d != dist[u]) continue;
        for (const Neighbor& n : adjacency_[u]) {
            if (!allowed.empty() && !allowed[n.node]) continue;
            const SimTime nd = d + n.latency;
            if (dist[n.node] < 0 || nd < dist[n.node]) {
                dist[n.node] = nd;
                pq.push({nd, n.node});
            }
        }
    }
    return dist;
}

double AvgPathLength(const NetworkGraph& g)
{
    const size_t n = g.node_count();
    if (n < 2) throw std::invalid_argument("path length needs at least two nodes");
    uint64_t total = 0;
    for (NodeId s = 0; s < n; ++s) {
        for (int d : g.HopDistances(s)) {
            if (d < 0) throw std::invalid_argument("graph is disconnected");
            total += static_cast<uint64_t>(d);
        }
    }
    return static_cast<double>(total) / (static_cast<double>(n) * static_cast<double>(n - 1));
}

double ClusteringCoefficient(const NetworkGraph& g)
{
    const size_t n = g.node_count();
    if (n == 0) throw std::invalid_argument("empty graph");
    double total = 0.0;
    for (NodeId v = 0; v < n; ++v) {
        const auto& nb = g.Neighbors(v);
        const size_t k = nb.size();
        if (k < 2) continue;
        size_t links = 0;
        for (size_t i = 0; i < k; ++i)
            for (size_t j = i + 1; j < k; ++j) links += g.HasEdge(nb[i].node, nb[j].node);
        total += 2.0 * static_cast<double>(links) / (static_cast<double>(k) * static_cast<double>(k - 1));
    }
    return total / static_cast<double>(n);
}

int MinerHopDiameter(const NetworkGraph& g)
{
    const auto miners = g.Miners();
    if (miners.empty()) throw std::invalid_argument("graph has no miners");
    int diameter = 0;
    for (NodeId m : miners) {
        const auto dist = g.HopDistances(m);
        for (NodeId o : miners) {
            if (dist[o] < 0) throw std::invalid_argument("miners are not connected");
            diameter = std::max(diameter, dist[o]);
        }
    }
    return diameter;
}

} // namespace evsim
