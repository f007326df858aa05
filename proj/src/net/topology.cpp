// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <evsim/net/topology.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace evsim {

void LatencyModel::Validate() const
{
    switch (kind) {
    case Kind::kConstant:
        if (!(a >= 0.0) || !std::isfinite(a)) throw TopologyError("latency: constant must be non-negative");
        break;
    case Kind::kUniform:
        if (!(a >= 0.0 && b >= a) || !std::isfinite(b)) throw TopologyError("latency: uniform needs 0 <= lo <= hi");
        break;
    case Kind::kLognormal:
        if (!std::isfinite(a) || !(b >= 0.0) || !std::isfinite(b)) throw TopologyError("latency: lognormal needs sigma >= 0");
        break;
    }
}

SimTime LatencyModel::Sample(Rng& rng) const
{
    double ms = a;
    switch (kind) {
    case Kind::kConstant: break;
    case Kind::kUniform: ms = a + (b - a) * rng.Uniform01(); break;
    case Kind::kLognormal: ms = std::exp(a + b * rng.Normal()); break;
    }
    return std::llround(ms * static_cast<double>(kMicrosPerMilli));
}

const char* ToString(TopologyKind k)
{
    switch (k) {
    case TopologyKind::kWattsStrogatz: return "watts-strogatz";
    case TopologyKind::kErdosRenyi: return "erdos-renyi";
    case TopologyKind::kStar: return "star";
    case TopologyKind::kPath: return "path";
    case TopologyKind::kFullMesh: return "full-mesh";
    case TopologyKind::kMinerBackbone: return "miner-backbone";
    }
    return "unknown";
}

TopologyKind ParseTopologyKind(std::string_view s)
{
    if (s == "watts-strogatz" || s == "ws") return TopologyKind::kWattsStrogatz;
    if (s == "erdos-renyi" || s == "er") return TopologyKind::kErdosRenyi;
    if (s == "star") return TopologyKind::kStar;
    if (s == "path") return TopologyKind::kPath;
    if (s == "full-mesh" || s == "mesh") return TopologyKind::kFullMesh;
    if (s == "miner-backbone" || s == "backbone") return TopologyKind::kMinerBackbone;
    throw TopologyError("unknown topology kind '" + std::string(s) + "'");
}

void TopologySpec::Validate() const
{
    latency.Validate();
    switch (kind) {
    case TopologyKind::kWattsStrogatz:
        if (n < 3) throw TopologyError("watts-strogatz: n must be at least 3");
        if (k < 2 || k % 2 != 0 || k >= n) throw TopologyError("watts-strogatz: k must be even with 2 <= k < n");
        if (!(beta >= 0.0 && beta <= 1.0)) throw TopologyError("watts-strogatz: beta must lie in [0, 1]");
        break;
    case TopologyKind::kErdosRenyi:
        if (n < 1) throw TopologyError("erdos-renyi: n must be positive");
        if (!(p > 0.0 && p <= 1.0)) throw TopologyError("erdos-renyi: p must lie in (0, 1]");
        break;
    case TopologyKind::kStar:
    case TopologyKind::kPath:
    case TopologyKind::kFullMesh:
        if (n < 1) throw TopologyError(std::string(ToString(kind)) + ": n must be positive");
        break;
    case TopologyKind::kMinerBackbone:
        if (miners < 1) throw TopologyError("miner-backbone: needs at least one miner");
        if (observers > 0 && attach < 1) throw TopologyError("miner-backbone: attach must be at least 1");
        break;
    }
    if (kind != TopologyKind::kMinerBackbone && miners > n) throw TopologyError("more miners than nodes");
}

namespace {

// Ring lattice, then each lattice edge (u, u+j) is rewired with probability
// beta to a uniformly chosen non-neighbor, visiting j = 1..k/2 in the outer
// loop and u in the inner loop.
void BuildWattsStrogatz(NetworkGraph& g, const TopologySpec& s, Rng& rng)
{
    const size_t n = s.n;
    for (size_t j = 1; j <= s.k / 2; ++j)
        for (NodeId u = 0; u < n; ++u) g.AddEdge(u, static_cast<NodeId>((u + j) % n), 0);
    if (s.beta == 0.0) return;
    for (size_t j = 1; j <= s.k / 2; ++j) {
        for (NodeId u = 0; u < n; ++u) {
            const NodeId v = static_cast<NodeId>((u + j) % n);
            if (!(rng.Uniform01() < s.beta)) continue;
            if (g.Degree(u) >= n - 1) continue;
            NodeId w;
            do {
                w = static_cast<NodeId>(rng.Below(n));
            } while (w == u || g.HasEdge(u, w));
            if (!g.HasEdge(u, v)) continue;
            g.RemoveEdge(u, v);
            g.AddEdge(u, w, 0);
        }
    }
}

void AssignLatencies(NetworkGraph& g, const LatencyModel& model, Rng& rng)
{
    for (const Edge& e : g.Edges()) g.SetEdgeLatency(e.a, e.b, model.Sample(rng));
}

} // namespace

size_t RepairConnectivity(NetworkGraph& g, const LatencyModel& latency, Rng& rng)
{
    const auto label = g.Components();
    if (label.empty()) return 0;
    const uint32_t count = *std::max_element(label.begin(), label.end()) + 1;
    std::vector<std::vector<NodeId>> members(count);
    for (NodeId v = 0; v < label.size(); ++v) members[label[v]].push_back(v);
    // Join each further component to a random node already in the merged part.
    std::vector<NodeId> merged = members[0];
    for (uint32_t c = 1; c < count; ++c) {
        const NodeId a = merged[rng.Below(merged.size())];
        const NodeId b = members[c][rng.Below(members[c].size())];
        g.AddEdge(a, b, latency.Sample(rng));
        merged.insert(merged.end(), members[c].begin(), members[c].end());
    }
    return count - 1;
}

NetworkGraph GenerateTopology(const TopologySpec& spec)
{
    spec.Validate();
    Rng structure = Rng::Derive(spec.seed, "topology");
    Rng latency = Rng::Derive(spec.seed, "latency");

    if (spec.kind == TopologyKind::kMinerBackbone) {
        // The backbone is drawn from its own stream before any observer, so
        // the miner subgraph does not depend on the observer count.
        NetworkGraph g(spec.miners, NodeRole::kMiner);
        Rng backbone = Rng::Derive(spec.seed, "backbone");
        for (NodeId a = 0; a < spec.miners; ++a)
            for (NodeId b = a + 1; b < spec.miners; ++b) g.AddEdge(a, b, spec.latency.Sample(backbone));
        const size_t attach = std::min(spec.attach, spec.miners);
        std::vector<NodeId> pool(spec.miners);
        for (size_t i = 0; i < spec.observers; ++i) {
            const NodeId o = g.AddNode(NodeRole::kObserver);
            std::iota(pool.begin(), pool.end(), 0);
            for (size_t j = 0; j < attach; ++j) {
                std::swap(pool[j], pool[j + structure.Below(pool.size() - j)]);
                g.AddEdge(o, pool[j], spec.latency.Sample(latency));
            }
        }
        return g;
    }

    NetworkGraph g(spec.n);
    switch (spec.kind) {
    case TopologyKind::kWattsStrogatz: BuildWattsStrogatz(g, spec, structure); break;
    case TopologyKind::kErdosRenyi:
        for (NodeId a = 0; a < spec.n; ++a)
            for (NodeId b = a + 1; b < spec.n; ++b)
                if (structure.Uniform01() < spec.p) g.AddEdge(a, b, 0);
        break;
    case TopologyKind::kStar:
        for (NodeId v = 1; v < spec.n; ++v) g.AddEdge(0, v, 0);
        break;
    case TopologyKind::kPath:
        for (NodeId v = 1; v < spec.n; ++v) g.AddEdge(v - 1, v, 0);
        break;
    case TopologyKind::kFullMesh:
        for (NodeId a = 0; a < spec.n; ++a)
            for (NodeId b = a + 1; b < spec.n; ++b) g.AddEdge(a, b, 0);
        break;
    case TopologyKind::kMinerBackbone: break;
    }
    AssignLatencies(g, spec.latency, latency);
    Rng repair = Rng::Derive(spec.seed, "repair");
    RepairConnectivity(g, spec.latency, repair);

    if (spec.miners > 0) {
        Rng placement = Rng::Derive(spec.seed, "placement");
        std::vector<NodeId> ids(spec.n);
        std::iota(ids.begin(), ids.end(), 0);
        for (size_t j = 0; j < spec.miners; ++j) {
            std::swap(ids[j], ids[j + placement.Below(ids.size() - j)]);
            g.SetRole(ids[j], NodeRole::kMiner);
        }
    }
    return g;
}

} // namespace evsim
