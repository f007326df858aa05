// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "oracles.hpp"

#include <evsim/metrics/metrics.hpp>
#include <evsim/net/topology.hpp>
#include <evsim/util/rng.hpp>

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace evsim;

namespace {

std::vector<MinerAgent> Roster(const std::vector<double>& alphas, NodeId first = 0)
{
    std::vector<MinerAgent> out;
    for (size_t i = 0; i < alphas.size(); ++i) out.push_back({first + static_cast<NodeId>(i), alphas[i], 1e6, 0.0, 0, 0});
    return out;
}

/// Independent check: does any subset of size < eps*n hold more than half?
bool AnyControllingSubset(const std::vector<double>& alphas, double eps)
{
    const size_t n = alphas.size();
    for (uint32_t mask = 1; mask < (1u << n); ++mask) {
        double size = 0;
        double sum = 0;
        for (size_t i = 0; i < n; ++i) {
            if (!(mask >> i & 1)) continue;
            size += 1;
            sum += alphas[i];
        }
        if (size < eps * static_cast<double>(n) && sum > 0.5) return true;
    }
    return false;
}

std::vector<double> RandomShares(Rng& rng, size_t n)
{
    std::vector<double> w(n);
    for (double& x : w) x = rng.Exponential(1.0);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) x /= total;
    // Absorb rounding so the roster sums to one within validation tolerance.
    w.back() = 1.0 - std::accumulate(w.begin(), w.end() - 1, 0.0);
    return w;
}

} // namespace

TEST_SUITE("metrics")
{
    TEST_CASE("producer entropy")
    {
        CHECK(EntropyBits({{0, 5}, {1, 5}, {2, 5}, {3, 5}}) == doctest::Approx(2.0));
        CHECK(EntropyBits({{7, 12}}) == 0.0);
        CHECK(EntropyBits({{0, 3}, {1, 1}}) == doctest::Approx(0.811278).epsilon(1e-6));
        CHECK(EntropyBits({{0, 3}, {1, 0}}) == 0.0);
        CHECK_THROWS_AS(EntropyBits({}), std::invalid_argument);
        CHECK_THROWS_AS(EntropyBits({{0, 0}}), std::invalid_argument);

        Rng rng(4);
        for (int trial = 0; trial < 200; ++trial) {
            const size_t k = 1 + rng.Below(12);
            std::map<NodeId, uint64_t> counts;
            for (size_t i = 0; i < k; ++i) counts[static_cast<NodeId>(i)] = 1 + rng.Below(50);
            const double h = EntropyBits(counts);
            CHECK(h >= 0.0);
            CHECK(h <= std::log2(static_cast<double>(k)) + 1e-12);
        }
    }

    TEST_CASE("finality error rate")
    {
        CHECK(FinalityErrorRate(0.0, 6, 1000, 2000, 1).rate == 0.0);
        CHECK_THROWS_AS(FinalityErrorRate(0.3, 6, 99, 2000, 1), std::invalid_argument);

        const FinalityEstimate e = FinalityErrorRate(0.3, 6, 50000, 2000, 12);
        CHECK(e.trials == 50000);
        CHECK(std::abs(e.rate - oracle::CatchUpProbability(0.3, 6)) <= 2.0 * e.stderr_);
        CHECK(e.stderr_ == doctest::Approx(std::sqrt(e.rate * (1 - e.rate) / 50000)));

        CHECK(FinalityErrorRate(0.3, 1, 5000, 2000, 3).rate > FinalityErrorRate(0.3, 6, 5000, 2000, 3).rate);
        double prev = -1.0;
        for (double q : {0.1, 0.2, 0.3, 0.4}) {
            const double r = FinalityErrorRate(q, 6, 5000, 2000, 3).rate;
            CHECK(r >= prev);
            prev = r;
        }
        for (int z = 1; z < 8; ++z)
            CHECK(FinalityErrorRate(0.35, z, 2000, 2000, 9).rate >= FinalityErrorRate(0.35, z + 1, 2000, 2000, 9).rate);
        CHECK(FinalityErrorRate(0.6, 6, 1000, 2000, 1).rate > 0.99);
    }

    TEST_CASE("throughput under a latency bound")
    {
        std::vector<BlockObservation> blocks(10, BlockObservation{100, 800.0});
        CHECK(ThroughputC(blocks, 1000.0, 5000.0).tps == doctest::Approx(1.0));
        CHECK(ThroughputC(blocks, 1000.0, 799.0).tps == 0.0);
        blocks[3].t95_ms.reset();
        const ThroughputReport r = ThroughputC(blocks, 1000.0, 5000.0);
        CHECK(r.counted_blocks == 9);
        CHECK(r.confirmed_txs == 900);
        CHECK_THROWS_AS(ThroughputC(blocks, 0.0, 5000.0), std::invalid_argument);
        CHECK(AnalyticCeiling(8000000, 400, 600.0) == doctest::Approx(33.3333).epsilon(1e-4));
    }

    TEST_CASE("participation ratio")
    {
        const std::vector<NodeId> three{0, 1, 2, 2, 1};
        CHECK(ParticipationRatio(10, three) == doctest::Approx(0.3));
        CHECK(ParticipationRatio(10, std::vector<NodeId>{}) == 0.0);

        // P(one of the miners never produces in 300 draws) <= 0.9^300.
        const auto roster = Roster({0.6, 0.3, 0.1});
        for (uint64_t seed = 0; seed < 20; ++seed) {
            Rng rng(seed);
            std::vector<NodeId> producers;
            for (int i = 0; i < 300; ++i) producers.push_back(SampleNextProducer(roster, rng));
            CHECK(ParticipationRatio(10, producers) == doctest::Approx(0.3));
        }
    }

    TEST_CASE("coalition control examples")
    {
        const auto even = IsDecentralised(Roster({0.34, 0.33, 0.33}), 0.5);
        CHECK(even.decentralised);
        CHECK_FALSE(even.violating_coalition);
        CHECK(even.method == CoalitionMethod::kExhaustive);

        for (double eps : {0.51, 0.75, 1.0}) {
            const auto r = IsDecentralised(Roster({0.6, 0.4}), eps);
            CHECK_FALSE(r.decentralised);
            REQUIRE(r.violating_coalition);
            CHECK(*r.violating_coalition == std::vector<NodeId>{0});
        }
        // Two miners at epsilon 0.5: only the empty coalition is small enough.
        CHECK(IsDecentralised(Roster({0.6, 0.4}), 0.5).decentralised);
        CHECK_THROWS_AS(IsDecentralised(Roster({1.0}), 0.0), std::invalid_argument);

        const auto baseline = Roster({0.34, 0.33, 0.11, 0.11, 0.11});
        CHECK(IsDecentralised(baseline, 0.3).decentralised);
        CHECK_FALSE(IsDecentralised(baseline, 0.5).decentralised);
        CHECK_FALSE(IsDecentralised(Roster({1.0, 0.0, 0.0, 0.0, 0.0}), 0.3).decentralised);
    }

    TEST_CASE("coalition search matches subset enumeration")
    {
        Rng rng(17);
        for (int trial = 0; trial < 300; ++trial) {
            const size_t n = 1 + rng.Below(10);
            const auto alphas = RandomShares(rng, n);
            const auto roster = Roster(alphas, 100);
            for (double eps : {0.2, 0.4, 0.6, 1.0}) {
                const auto exact = IsDecentralised(roster, eps);
                const auto greedy = IsDecentralisedGreedy(roster, eps);
                const bool expected = !AnyControllingSubset(alphas, eps);
                CHECK(exact.decentralised == expected);
                CHECK(greedy.decentralised == exact.decentralised);
                if (exact.violating_coalition) {
                    double sum = 0;
                    for (NodeId id : *exact.violating_coalition) sum += alphas[id - 100];
                    CHECK(sum > 0.5);
                    CHECK(static_cast<double>(exact.violating_coalition->size()) < eps * static_cast<double>(n));
                }
            }
        }
        // Above the exhaustive limit the greedy search answers.
        std::vector<double> many(25, 0.04);
        CHECK(IsDecentralised(Roster(many), 0.4).method == CoalitionMethod::kGreedy);
    }

    TEST_CASE("economic centrality")
    {
        auto one = EconomicCentrality({{{0, 2}, 5}}, 3);
        CHECK(one == std::vector<double>{1.0, 0.0, 0.0});

        std::map<std::pair<NodeId, NodeId>, uint64_t> uniform;
        for (NodeId a = 0; a < 4; ++a)
            for (NodeId b = 0; b < 4; ++b)
                if (a != b) uniform[{a, b}] = 7;
        for (double c : EconomicCentrality(uniform, 4)) CHECK(c == doctest::Approx(0.25));
        CHECK_THROWS_AS(EconomicCentrality({}, 3), std::invalid_argument);
        CHECK_THROWS_AS(EconomicCentrality({{{0, 1}, 0}}, 3), std::invalid_argument);

        TopologySpec ws;
        ws.n = 80;
        ws.k = 6;
        ws.miners = 3;
        ws.seed = 3;
        const NetworkGraph g = GenerateTopology(ws);
        SimConfig c;
        c.graph = g;
        c.miners = {{g.Miners()[0], 0.5, 1e6, 0, 0, 0}, {g.Miners()[1], 0.3, 1e6, 0, 0, 0}, {g.Miners()[2], 0.2, 1e6, 0, 0, 0}};
        c.block.target_interval_s = 5;
        c.block.max_bytes = 50000;
        c.block.tx_rate = 20;
        c.duration = 300 * kMicrosPerSecond;
        c.seed = 2;
        const SimResult r = RunSimulation(c);
        const auto share = EconomicCentrality(r.trace.flows, g.node_count());
        const double total = std::accumulate(r.trace.bytes_sent.begin(), r.trace.bytes_sent.end(), 0.0);
        double sum = 0;
        for (NodeId v = 0; v < g.node_count(); ++v) {
            CHECK(share[v] == doctest::Approx(static_cast<double>(r.trace.bytes_sent[v]) / total));
            sum += share[v];
        }
        CHECK(sum == doctest::Approx(1.0));
    }

    TEST_CASE("throughput stays under the analytic ceiling")
    {
        NetworkGraph g(6);
        for (NodeId v = 1; v < 6; ++v) g.AddEdge(v - 1, v, 2000);
        SimConfig c;
        c.graph = g;
        c.miners = {{0, 0.5, 1e7, 0, 0, 0}, {3, 0.3, 1e7, 0, 0, 0}, {5, 0.2, 1e7, 0, 0, 0}};
        c.block.max_bytes = 4180; // ten 400-byte transactions
        c.block.avg_tx_bytes = 400;
        c.block.target_interval_s = 1.0;
        c.duration = 3000 * kMicrosPerSecond;
        c.seed = 41;
        const SimResult r = RunSimulation(c);
        MetricsConfig m;
        m.trials = 200;
        const MetricsReport rep = ComputeMetrics(r, c, m);
        REQUIRE(rep.throughput.counted_blocks >= 50);
        CHECK(rep.throughput.analytic_ceiling_tps == doctest::Approx(10.0));
        CHECK(rep.throughput.tps <= 1.05 * rep.throughput.analytic_ceiling_tps);
        CHECK(rep.throughput.tps > 0.8 * rep.throughput.analytic_ceiling_tps);

        // Revenue credited per producer equals subsidy plus fees of its best-chain blocks.
        Amount credited = 0;
        for (const MinerOutcome& o : rep.miners) credited += o.revenue;
        Amount expected = 0;
        for (size_t i = 0; i < r.blocks.size(); ++i) {
            if (!r.blocks[i].on_best_chain || !r.blocks[i].in_horizon) continue;
            Amount fees = 0;
            for (const Transaction& tx : r.FullBlock(i).transactions) fees += tx.fee;
            expected += c.block.subsidy + fees;
        }
        CHECK(credited == expected);
        CHECK(rep.d_entropy_bits <= std::log2(3.0));
        CHECK(rep.participation_ratio == doctest::Approx(0.5));
    }

    TEST_CASE("panel flags")
    {
        auto point = [](double c_tps, bool decentralised, double s_rate) {
            PanelPoint p;
            p.report.throughput.tps = c_tps;
            p.report.coalition.decentralised = decentralised;
            p.report.finality.rate = s_rate;
            p.report.secure = s_rate < 0.01;
            p.tau_ms = 5000;
            return p;
        };
        std::vector<ScenarioSeries> series(3);
        series[0].name = "baseline";
        for (double c : {5.0, 50.0, 500.0}) series[0].points.push_back(point(c, true, 0.006));
        series[0].points[0].label = "bw=10";
        series[1].name = "flat";
        for (double c : {5.0, 5.0}) series[1].points.push_back(point(c, true, 0.006));
        series[2].name = "slow";
        series[2].points.push_back(point(0.0, true, 0.006));

        const auto rows = TrilemmaPanel(series);
        REQUIRE(rows.size() == 6);
        CHECK(rows[0].scenario == "baseline/bw=10");
        CHECK(rows[1].scenario == "baseline");
        CHECK(rows[0].joint());
        CHECK_FALSE(rows[3].scalable);
        CHECK_FALSE(rows[5].scalable);

        const std::string csv = PanelCsv(rows);
        CHECK(csv.rfind("scenario,D_bits,S_rate,S_stderr,C_tps,tau_ms,decentralised,secure,scalable,joint\n", 0) == 0);
        CHECK(csv.find("baseline/bw=10,0,0.006,0,5,5000,true,true,true,true\n") != std::string::npos);

        const std::vector<double> up{1, 2, 3};
        const std::vector<double> down{3, 2};
        CHECK(ScalableAcross(up));
        CHECK_FALSE(ScalableAcross(down));
        CHECK_FALSE(ScalableAcross(std::vector<double>{}));
    }
}
