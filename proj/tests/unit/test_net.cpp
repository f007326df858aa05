// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "oracles.hpp"

#include <evsim/net/graph.hpp>
#include <evsim/net/relay.hpp>
#include <evsim/net/simulation.hpp>
#include <evsim/net/topology.hpp>
#include <evsim/net/trace.hpp>

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

using namespace evsim;
using namespace evsim::oracle;

namespace {

// Large enough that an 80-byte header serializes in well under a microsecond.
constexpr double kFastLink = 1e12;

std::vector<std::pair<uint32_t, uint32_t>> EdgePairs(const NetworkGraph& g)
{
    std::vector<std::pair<uint32_t, uint32_t>> out;
    for (const Edge& e : g.Edges()) out.emplace_back(e.a, e.b);
    return out;
}

TopologySpec Spec(TopologyKind kind, size_t n, uint64_t seed = 1)
{
    TopologySpec s;
    s.kind = kind;
    s.n = n;
    s.seed = seed;
    s.latency = LatencyModel::Constant(10.0);
    return s;
}

TopologySpec Ws(size_t n, size_t k, double beta, uint64_t seed = 1)
{
    TopologySpec s = Spec(TopologyKind::kWattsStrogatz, n, seed);
    s.k = k;
    s.beta = beta;
    return s;
}

TopologySpec Er(size_t n, double p, uint64_t seed = 1)
{
    TopologySpec s = Spec(TopologyKind::kErdosRenyi, n, seed);
    s.p = p;
    return s;
}

std::vector<MinerAgent> Miners(const std::vector<NodeId>& ids, const std::vector<double>& alphas, double bw = kFastLink)
{
    std::vector<MinerAgent> out;
    for (size_t i = 0; i < ids.size(); ++i) out.push_back({ids[i], alphas[i], bw, 0.0, 0, 0});
    return out;
}

SimConfig BaseConfig(NetworkGraph g, std::vector<MinerAgent> miners)
{
    SimConfig c;
    c.graph = std::move(g);
    c.miners = std::move(miners);
    c.block.max_bytes = 20000;
    c.block.avg_tx_bytes = 250;
    c.block.target_interval_s = 60.0;
    c.block.tx_rate = 2.0;
    c.observer_bandwidth = kFastLink;
    return c;
}

bool SameTrace(const PropagationTrace& a, const PropagationTrace& b)
{
    if (a.messages.size() != b.messages.size() || a.bytes_sent != b.bytes_sent || a.flows != b.flows) return false;
    for (size_t i = 0; i < a.messages.size(); ++i) {
        const MessageTrace& x = a.messages[i];
        const MessageTrace& y = b.messages[i];
        if (x.hash != y.hash || x.origin != y.origin || x.origin_time != y.origin_time ||
            x.first_receipt != y.first_receipt || x.size_bytes != y.size_bytes)
            return false;
    }
    return true;
}

} // namespace

TEST_SUITE("netsim")
{
    TEST_CASE("star and ring lattice structure")
    {
        const NetworkGraph star = GenerateTopology(Spec(TopologyKind::kStar, 5));
        CHECK(star.edge_count() == 4);
        CHECK(star.Degree(0) == 4);

        const NetworkGraph ring = GenerateTopology(Ws(20, 4, 0.0));
        CHECK(ring.edge_count() == 40);
        for (NodeId v = 0; v < 20; ++v) CHECK(ring.Degree(v) == 4);
        CHECK(ring.HasEdge(0, 19));
        CHECK(ring.HasEdge(0, 18));
        CHECK_FALSE(ring.HasEdge(0, 3));
    }

    TEST_CASE("invalid topology parameters are rejected")
    {
        CHECK_THROWS_AS(GenerateTopology(Ws(20, 3, 0.1)), TopologyError);
        CHECK_THROWS_AS(GenerateTopology(Ws(20, 20, 0.1)), TopologyError);
        CHECK_THROWS_AS(GenerateTopology(Ws(20, 4, 1.5)), TopologyError);
        CHECK_THROWS_AS(GenerateTopology(Er(20, 0.0)), TopologyError);
        CHECK_THROWS_AS(ParseTopologyKind("hypercube"), TopologyError);
        NetworkGraph g(3);
        CHECK_THROWS_AS(g.AddEdge(1, 1, 0), std::invalid_argument);
        CHECK(g.AddEdge(0, 1, 5));
        CHECK_FALSE(g.AddEdge(1, 0, 7));
        CHECK(g.EdgeLatency(0, 1) == 5);
    }

    TEST_CASE("same seed, same edges")
    {
        const auto a = GenerateTopology(Ws(300, 6, 0.3, 9));
        const auto b = GenerateTopology(Ws(300, 6, 0.3, 9));
        const auto c = GenerateTopology(Ws(300, 6, 0.3, 10));
        auto key = [](const NetworkGraph& g) {
            std::vector<std::tuple<NodeId, NodeId, SimTime>> v;
            for (const Edge& e : g.Edges()) v.emplace_back(e.a, e.b, e.latency);
            return v;
        };
        CHECK(key(a) == key(b));
        CHECK(key(a) != key(c));
    }

    TEST_CASE("sparse random graphs are repaired into one component")
    {
        for (uint64_t seed = 1; seed <= 5; ++seed) {
            const NetworkGraph g = GenerateTopology(Er(200, 0.004, seed));
            CHECK(g.ComponentCount() == 1);
        }
    }

    TEST_CASE("path length and clustering on small graphs")
    {
        const NetworkGraph mesh = GenerateTopology(Spec(TopologyKind::kFullMesh, 4));
        CHECK(AvgPathLength(mesh) == doctest::Approx(1.0));
        CHECK(ClusteringCoefficient(mesh) == doctest::Approx(1.0));

        const NetworkGraph path = GenerateTopology(Spec(TopologyKind::kPath, 4));
        CHECK(AvgPathLength(path) == doctest::Approx(5.0 / 3.0));
        CHECK(ClusteringCoefficient(path) == 0.0);

        NetworkGraph split(4);
        split.AddEdge(0, 1, 1);
        split.AddEdge(2, 3, 1);
        CHECK_THROWS_AS(AvgPathLength(split), std::invalid_argument);
    }

    TEST_CASE("watts-strogatz 1000 against BFS and triangle oracles")
    {
        const NetworkGraph g = GenerateTopology(Ws(1000, 10, 0.1, 3));
        REQUIRE(g.ComponentCount() == 1);
        CHECK(2.0 * static_cast<double>(g.edge_count()) / 1000.0 == doctest::Approx(10.0));

        const auto edges = EdgePairs(g);
        const double l_oracle = MeanHops(HopMatrix(1000, edges));
        CHECK(std::abs(AvgPathLength(g) - l_oracle) <= 0.01 * l_oracle);
        const double c = ClusteringCoefficient(g);
        CHECK(c == doctest::Approx(Clustering(1000, edges)).epsilon(1e-12));

        const NetworkGraph er = GenerateTopology(Er(1000, 10.0 / 999.0, 3));
        CHECK(c >= 5.0 * ClusteringCoefficient(er));
    }

    TEST_CASE("small-world separation between 100 and 1000 nodes")
    {
        const NetworkGraph small = GenerateTopology(Ws(100, 10, 0.1, 5));
        const NetworkGraph large = GenerateTopology(Ws(1000, 10, 0.1, 5));
        CHECK(AvgPathLength(large) / AvgPathLength(small) < 3.0);
        CHECK(ClusteringCoefficient(small) >= 5.0 * ClusteringCoefficient(GenerateTopology(Er(100, 10.0 / 99.0, 5))));
        CHECK(ClusteringCoefficient(large) >= 5.0 * ClusteringCoefficient(GenerateTopology(Er(1000, 10.0 / 999.0, 5))));
    }

    TEST_CASE("miner hop diameter")
    {
        TopologySpec bb;
        bb.kind = TopologyKind::kMinerBackbone;
        bb.miners = 6;
        bb.observers = 40;
        bb.attach = 2;
        bb.seed = 2;
        CHECK(MinerHopDiameter(GenerateTopology(bb)) == 1);

        NetworkGraph path = GenerateTopology(Spec(TopologyKind::kPath, 5));
        path.SetRole(0, NodeRole::kMiner);
        path.SetRole(4, NodeRole::kMiner);
        CHECK(MinerHopDiameter(path) == 4);

        TopologySpec ws = Ws(200, 6, 0.2, 8);
        ws.miners = 7;
        const NetworkGraph g = GenerateTopology(ws);
        const auto miners = g.Miners();
        REQUIRE(miners.size() == 7);
        const auto dist = HopMatrix(200, EdgePairs(g));
        int oracle = 0;
        for (NodeId a : miners)
            for (NodeId b : miners) oracle = std::max(oracle, dist[a][b]);
        CHECK(MinerHopDiameter(g) == oracle);
    }

    TEST_CASE("sender cost by strategy")
    {
        RelayStrategy unicast;
        RelayStrategy multicast{RelayKind::kMulticast};
        RelayStrategy gossip{RelayKind::kGossip, 8};
        CHECK(SenderCost(unicast, 10, 80) == 800);
        CHECK(SenderCost(multicast, 10, 80) == SenderCost(multicast, 10000, 80));
        CHECK(SenderCost(gossip, 10, 1000000) == 8000000);
        CHECK(SenderCost(gossip, 100000, 1000000) == 8000000);
        for (uint64_t n = 1; n <= 1000; n += 37) {
            CHECK(SenderCost(unicast, n + 1, 80) - SenderCost(unicast, n, 80) == 80);
            CHECK(SenderCost(multicast, n, 80) == 160);
        }
        CHECK_THROWS_AS(SenderCost(unicast, 0, 80), std::invalid_argument);
        CHECK_THROWS_AS((RelayStrategy{RelayKind::kGossip, 0}.Validate()), std::invalid_argument);
        CHECK(ParseRelayKind("miner-direct") == RelayKind::kMinerDirect);
    }

    TEST_CASE("single miner on a star reaches every observer in one hop")
    {
        SimConfig c = BaseConfig(GenerateTopology(Spec(TopologyKind::kStar, 5)), Miners({0}, {1.0}));
        c.poisson_blocks = false;
        c.scripted = {{1000000, 0}};
        c.duration = 2000000;
        const SimResult r = RunSimulation(c);
        REQUIRE(r.blocks.size() == 1);
        const MessageTrace& h = r.trace.Find(MessageKind::kHeader, r.blocks[0].hash);
        CHECK(h.first_receipt[0] == 1000000);
        for (NodeId v = 1; v < 5; ++v) CHECK(h.first_receipt[v] - h.origin_time == 10 * kMicrosPerMilli);
        CHECK(r.converged);
        for (const SpvClient& client : r.clients) CHECK(client.BestTip() == r.blocks[0].hash);
    }

    TEST_CASE("t95 on a star and a path")
    {
        SimConfig c = BaseConfig(GenerateTopology(Spec(TopologyKind::kStar, 20)), Miners({0}, {1.0}));
        c.poisson_blocks = false;
        c.scripted = {{0, 0}};
        SimResult r = RunSimulation(c);
        CHECK(TimeToFraction(r.trace, r.trace.messages[0], 0.95) == 10 * kMicrosPerMilli);

        TopologySpec path = Spec(TopologyKind::kPath, 100);
        path.latency = LatencyModel::Constant(1.0);
        c = BaseConfig(GenerateTopology(path), Miners({0}, {1.0}));
        c.poisson_blocks = false;
        c.scripted = {{0, 0}};
        r = RunSimulation(c);
        CHECK(TimeToFraction(r.trace, r.trace.messages[0], 0.95) == 94 * kMicrosPerMilli);
        CHECK(TimeToFraction(r.trace, r.trace.messages[0], 1.0) == 99 * kMicrosPerMilli);
        CHECK_THROWS_AS(r.trace.Find(MessageKind::kBlock, Hash256{}), std::out_of_range);
    }

    TEST_CASE("simultaneous publication resolves after the next block")
    {
        // Miners 0, 1, 2 on a triangle, observers hanging off each.
        NetworkGraph g(7);
        g.AddEdge(0, 1, 20000);
        g.AddEdge(1, 2, 20000);
        g.AddEdge(0, 2, 20000);
        g.AddEdge(0, 3, 5000);
        g.AddEdge(1, 4, 5000);
        g.AddEdge(2, 5, 5000);
        g.AddEdge(3, 6, 5000);
        SimConfig c = BaseConfig(std::move(g), Miners({0, 1, 2}, {0.4, 0.4, 0.2}));
        c.poisson_blocks = false;
        c.scripted = {{1000000, 0}, {1000000, 1}, {30000000, 2}};
        c.duration = 60000000;
        const SimResult r = RunSimulation(c);
        REQUIRE(r.blocks.size() == 3);
        CHECK(r.extension_blocks == 0);
        const Hash256 a = r.blocks[0].hash;
        const Hash256 b = r.blocks[1].hash;
        for (const SpvClient& client : r.clients) {
            CHECK(client.tree().Contains(a));
            CHECK(client.tree().Contains(b));
            CHECK(client.BestTip() == r.blocks[2].hash);
        }
        CHECK(r.blocks[0].on_best_chain != r.blocks[1].on_best_chain);
        CHECK(r.blocks[2].on_best_chain);
        CHECK(r.blocks[2].height == 2);
        CHECK(r.converged);
    }

    TEST_CASE("block count follows the Poisson rate")
    {
        TopologySpec ws = Ws(200, 8, 0.1, 11);
        ws.miners = 3;
        const NetworkGraph g = GenerateTopology(ws);
        const auto ids = g.Miners();
        SimConfig c = BaseConfig(g, Miners(ids, {0.5, 0.3, 0.2}, 1.25e6));
        c.duration = 2 * 3600 * kMicrosPerSecond;
        c.seed = 77;
        const SimResult r = RunSimulation(c);
        const double expected = 7200.0 / 60.0;
        const auto in_horizon = std::count_if(r.blocks.begin(), r.blocks.end(), [](const BlockRecord& b) { return b.in_horizon; });
        CHECK(std::abs(static_cast<double>(in_horizon) - expected) <= 3.0 * std::sqrt(expected));
        CHECK(r.converged);
    }

    TEST_CASE("identical configuration reproduces the run")
    {
        TopologySpec ws = Ws(120, 6, 0.2, 4);
        ws.miners = 4;
        ws.latency = LatencyModel::Uniform(5.0, 80.0);
        const NetworkGraph g = GenerateTopology(ws);
        for (RelayKind kind : {RelayKind::kUnicastFlood, RelayKind::kGossip, RelayKind::kMulticast, RelayKind::kMinerDirect}) {
            SimConfig c = BaseConfig(g, Miners(g.Miners(), {0.4, 0.3, 0.2, 0.1}, 1.25e6));
            c.relay.kind = kind;
            c.relay.fanout = 3;
            c.block.target_interval_s = 5.0;
            c.duration = 600 * kMicrosPerSecond;
            c.seed = 5;
            const SimResult a = RunSimulation(c);
            const SimResult b = RunSimulation(c);
            CHECK(SameTrace(a.trace, b.trace));
            REQUIRE(a.blocks.size() == b.blocks.size());
            for (size_t i = 0; i < a.blocks.size(); ++i) {
                CHECK(a.blocks[i].hash == b.blocks[i].hash);
                CHECK(a.block_txs[i] == b.block_txs[i]);
            }
            for (size_t v = 0; v < a.clients.size(); ++v)
                CHECK(a.clients[v].ExportSnapshot() == b.clients[v].ExportSnapshot());
            c.seed = 6;
            CHECK_FALSE(SameTrace(a.trace, RunSimulation(c).trace));
        }
    }

    TEST_CASE("first receipts respect shortest latency paths")
    {
        TopologySpec ws = Ws(150, 6, 0.2, 12);
        ws.miners = 5;
        ws.latency = LatencyModel::Lognormal(3.0, 0.5);
        const NetworkGraph g = GenerateTopology(ws);
        for (RelayKind kind : {RelayKind::kUnicastFlood, RelayKind::kGossip, RelayKind::kMulticast}) {
            SimConfig c = BaseConfig(g, Miners(g.Miners(), {0.2, 0.2, 0.2, 0.2, 0.2}, 1.25e6));
            c.relay.kind = kind;
            c.block.target_interval_s = 2.0;
            c.duration = 120 * kMicrosPerSecond;
            c.seed = 21;
            const SimResult r = RunSimulation(c);
            REQUIRE(r.blocks.size() > 20);
            std::map<NodeId, std::vector<SimTime>> dist;
            for (const MessageTrace& m : r.trace.messages) {
                auto it = dist.find(m.origin);
                if (it == dist.end()) it = dist.emplace(m.origin, g.ShortestLatencies(m.origin)).first;
                for (NodeId v = 0; v < g.node_count(); ++v) {
                    if (m.first_receipt[v] == kNever) continue;
                    CHECK(m.first_receipt[v] >= m.origin_time + it->second[v]);
                }
            }
            // A flood reaches every node; header-only nodes never see blocks.
            if (kind != RelayKind::kGossip) {
                for (const MessageTrace& m : r.trace.messages)
                    for (NodeId v = 0; v < g.node_count(); ++v) {
                        if (m.kind == MessageKind::kHeader || g.role(v) == NodeRole::kMiner)
                            CHECK(m.first_receipt[v] != kNever);
                        else
                            CHECK(m.first_receipt[v] == kNever);
                    }
            }
        }
    }

    TEST_CASE("observers do not move miner-to-miner receipts")
    {
        TopologySpec bb;
        bb.kind = TopologyKind::kMinerBackbone;
        bb.miners = 5;
        bb.latency = LatencyModel::Uniform(20.0, 60.0);
        bb.seed = 3;
        const NetworkGraph core = GenerateTopology(bb);
        const auto alphas = std::vector<double>{0.3, 0.3, 0.2, 0.1, 0.1};

        auto run = [&](const NetworkGraph& g, RelayKind kind) {
            SimConfig c = BaseConfig(g, Miners({0, 1, 2, 3, 4}, alphas, 1.25e6));
            c.relay.kind = kind;
            c.block.target_interval_s = 3.0;
            c.duration = 300 * kMicrosPerSecond;
            c.seed = 8;
            return RunSimulation(c);
        };

        NetworkGraph crowded = core;
        Rng rng(99);
        for (int i = 0; i < 300; ++i) {
            const NodeId o = crowded.AddNode(NodeRole::kObserver);
            crowded.AddEdge(o, static_cast<NodeId>(rng.Below(5)), 1000 + static_cast<SimTime>(rng.Below(50000)));
            if (o > 5) crowded.AddEdge(o, 5 + static_cast<NodeId>(rng.Below(o - 5)), 1000);
        }

        for (RelayKind kind : {RelayKind::kUnicastFlood, RelayKind::kGossip, RelayKind::kMulticast, RelayKind::kMinerDirect}) {
            const SimResult a = run(core, kind);
            const SimResult b = run(crowded, kind);
            REQUIRE(a.blocks.size() == b.blocks.size());
            for (size_t i = 0; i < a.blocks.size(); ++i) {
                CHECK(a.blocks[i].hash == b.blocks[i].hash);
                CHECK(a.blocks[i].on_best_chain == b.blocks[i].on_best_chain);
            }
            for (size_t i = 0; i < a.trace.messages.size(); ++i) {
                const MessageTrace& x = a.trace.messages[i];
                const MessageTrace& y = b.trace.messages[i];
                CHECK(x.hash == y.hash);
                // Gossip picks among all neighbours, so only block receipts are pinned there.
                if (kind == RelayKind::kGossip && x.kind == MessageKind::kHeader) continue;
                for (NodeId v = 0; v < 5; ++v) CHECK(x.first_receipt[v] == y.first_receipt[v]);
            }
        }
    }

    TEST_CASE("simulated blocks are valid and pay their producer")
    {
        TopologySpec ws = Ws(60, 4, 0.2, 6);
        ws.miners = 3;
        const NetworkGraph g = GenerateTopology(ws);
        SimConfig c = BaseConfig(g, Miners(g.Miners(), {0.5, 0.25, 0.25}, 125000.0));
        c.block.target_interval_s = 10.0;
        c.block.tx_rate = 30.0;
        c.block.propagation_budget_ms = 100.0;
        c.block.max_bytes = 100000;
        c.duration = 900 * kMicrosPerSecond;
        c.validate_blocks = true;
        c.seed = 31;
        const SimResult r = RunSimulation(c);
        REQUIRE(r.blocks.size() > 40);
        std::set<uint64_t> seen_on_best;
        for (size_t i = 0; i < r.blocks.size(); ++i) {
            const Block b = r.FullBlock(i);
            CHECK(ValidateBlock(b, r.blocks[i].parent).valid());
            CHECK(b.SizeBytes() == r.blocks[i].size_bytes);
            CHECK(b.SizeBytes() <= 12500);
            Amount fees = 0;
            for (const Transaction& tx : b.transactions) fees += tx.fee;
            CHECK(r.blocks[i].fees == fees);
            CHECK(r.blocks[i].reward == c.block.subsidy + fees);
            if (r.blocks[i].on_best_chain)
                for (uint64_t t : r.block_txs[i]) CHECK(seen_on_best.insert(t).second);
        }
        // Blocks fill up once the pool holds more than a block's worth.
        CHECK(r.blocks.back().size_bytes > 12000);
    }

    TEST_CASE("multicast delivers after overhead plus path latency")
    {
        TopologySpec path = Spec(TopologyKind::kPath, 6);
        path.latency = LatencyModel::Constant(4.0);
        SimConfig c = BaseConfig(GenerateTopology(path), Miners({0}, {1.0}));
        c.relay = {RelayKind::kMulticast, 8, 2.5, 80};
        c.poisson_blocks = false;
        c.scripted = {{0, 0}};
        const SimResult r = RunSimulation(c);
        const MessageTrace& h = r.trace.messages[0];
        for (NodeId v = 1; v < 6; ++v) CHECK(h.first_receipt[v] == 2500 + 4000 * static_cast<SimTime>(v));
        CHECK(r.trace.bytes_sent[0] == 2 * 80 + r.blocks[0].size_bytes + 80);
        for (NodeId v = 1; v < 6; ++v) CHECK(r.trace.bytes_sent[v] == 0);
    }
}
