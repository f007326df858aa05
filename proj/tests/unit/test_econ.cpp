// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "oracles.hpp"

#include <evsim/econ/mempool.hpp>
#include <evsim/econ/miner.hpp>

#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>
#include <string>

using namespace evsim;

namespace {

Transaction MakeTx(int i, uint32_t size, Amount fee)
{
    const std::string s = "tx" + std::to_string(i);
    Transaction tx = Transaction::FromPayload(std::span(reinterpret_cast<const uint8_t*>(s.data()), s.size()), fee);
    tx.payload_size = size;
    return tx;
}

std::vector<MinerAgent> Roster(std::initializer_list<double> alphas)
{
    std::vector<MinerAgent> out;
    NodeId id = 0;
    for (double a : alphas) out.push_back({id++, a, 1e6, 0.0, 0, 0});
    return out;
}

Amount TotalFee(const std::vector<Transaction>& txs)
{
    Amount total = 0;
    for (const auto& t : txs) total += t.fee;
    return total;
}

} // namespace

TEST_SUITE("mining_economics")
{
    TEST_CASE("roster validation names the failing field")
    {
        CHECK_NOTHROW(ValidateRoster(Roster({0.5, 0.5})));
        try {
            ValidateRoster(Roster({0.5, 0.4}));
            FAIL("expected RosterError");
        } catch (const RosterError& e) {
            CHECK(e.field() == "miners.alpha");
        }
        auto dup = Roster({0.5, 0.5});
        dup[1].id = 0;
        CHECK_THROWS_AS(ValidateRoster(dup), RosterError);
        auto slow = Roster({1.0});
        slow[0].upstream_bandwidth = 0;
        try {
            ValidateRoster(slow);
        } catch (const RosterError& e) {
            CHECK(e.field() == "miners[0].bandwidth_bps");
        }
        CHECK_THROWS_AS(ValidateRoster({}), RosterError);
    }

    TEST_CASE("sample_next_producer")
    {
        Rng rng(1);
        const auto solo = Roster({1.0});
        for (int i = 0; i < 100; ++i) CHECK(SampleNextProducer(solo, rng) == 0);
        CHECK_THROWS_AS(SampleNextProducer(std::vector<MinerAgent>{}, rng), std::invalid_argument);

        // 4 sigma binomial bound on 10,000 fair draws: 5000 +- 200.
        const auto half = Roster({0.5, 0.5});
        int zero = 0;
        for (int i = 0; i < 10000; ++i) zero += SampleNextProducer(half, rng) == 0;
        CHECK(zero >= 4800);
        CHECK(zero <= 5200);

        const auto three = Roster({0.6, 0.3, 0.1});
        std::vector<int> counts(3);
        const int n = 100000;
        for (int i = 0; i < n; ++i) ++counts[SampleNextProducer(three, rng)];
        for (size_t i = 0; i < 3; ++i) {
            const double p = three[i].alpha;
            const double freq = counts[i] / static_cast<double>(n);
            CHECK(std::abs(freq - p) <= 0.01);
            CHECK(std::abs(freq - p) <= 4 * std::sqrt(p * (1 - p) / n));
        }
    }

    TEST_CASE("sample_block_interval")
    {
        Rng a(5), b(5), c(6);
        double sum = 0, sum2 = 0;
        for (int i = 0; i < 10000; ++i) {
            const double x = SampleBlockInterval(0.1, a);
            CHECK(x == SampleBlockInterval(0.1, b));
            sum += x;
            sum2 += SampleBlockInterval(0.2, c);
        }
        CHECK(sum / 10000 >= 9.5);
        CHECK(sum / 10000 <= 10.5);
        CHECK(std::abs((sum2 / 10000) / (sum / 10000) - 0.5) <= 0.05 * 0.5);
        CHECK_THROWS(SampleBlockInterval(0.0, a));
    }

    TEST_CASE("mempool ordering, dedup and trimming")
    {
        Mempool pool;
        CHECK(pool.Add(MakeTx(0, 100, 100)));  // rate 1
        CHECK(pool.Add(MakeTx(1, 100, 500)));  // rate 5
        CHECK(pool.Add(MakeTx(2, 10, 50)));    // rate 5
        CHECK_FALSE(pool.Add(MakeTx(1, 100, 500)));
        CHECK(pool.size() == 3);
        CHECK(pool.total_bytes() == 210);
        std::vector<Amount> fees;
        for (const auto& e : pool) fees.push_back(e.tx.fee);
        CHECK(fees.back() == 100);
        pool.TrimToSize(2);
        CHECK_FALSE(pool.Contains(MakeTx(0, 100, 100).id));
        CHECK(pool.Remove(MakeTx(1, 100, 500).id));
        CHECK_FALSE(pool.Remove(MakeTx(1, 100, 500).id));
        CHECK(pool.total_bytes() == 10);
    }

    TEST_CASE("build_block_template examples")
    {
        Mempool empty;
        CHECK(BuildBlockTemplate(empty, 1000, 0).empty());

        Mempool pool;
        pool.Add(MakeTx(0, 10, 49)); // 4.9 per byte
        pool.Add(MakeTx(1, 10, 50)); // exactly 5
        const auto t = BuildBlockTemplate(pool, 1000, 5.0);
        REQUIRE(t.size() == 1);
        CHECK(t[0].fee == 50);

        // A tx that does not fit is skipped, later smaller ones still go in.
        Mempool skip;
        skip.Add(MakeTx(0, 60, 600));
        skip.Add(MakeTx(1, 50, 450));
        skip.Add(MakeTx(2, 30, 240));
        const auto s = BuildBlockTemplate(skip, 100, 0);
        CHECK(TotalFee(s) == 840);
    }

    TEST_CASE("template against the exhaustive subset optimum")
    {
        Rng rng(42);
        int exact = 0;
        for (int trial = 0; trial < 200; ++trial) {
            const size_t n = 1 + rng.Below(10);
            std::vector<Transaction> txs;
            Mempool pool;
            for (size_t i = 0; i < n; ++i) {
                txs.push_back(MakeTx(trial * 100 + static_cast<int>(i), 1 + static_cast<uint32_t>(rng.Below(50)),
                                     static_cast<Amount>(rng.Below(500))));
                pool.Add(txs.back());
            }
            const uint64_t cap = 1 + rng.Below(150);
            const double floor = static_cast<double>(rng.Below(4));

            Amount best = 0;
            for (uint32_t mask = 0; mask < (1u << n); ++mask) {
                uint64_t bytes = 0;
                Amount fee = 0;
                bool ok = true;
                for (size_t i = 0; i < n; ++i) {
                    if (!(mask >> i & 1)) continue;
                    ok = ok && MeetsFeerate(txs[i], floor);
                    bytes += txs[i].payload_size;
                    fee += txs[i].fee;
                }
                if (ok && bytes <= cap) best = std::max(best, fee);
            }
            const auto t = BuildBlockTemplate(pool, cap, floor);
            uint64_t bytes = 0;
            for (const auto& tx : t) {
                CHECK(MeetsFeerate(tx, floor));
                bytes += tx.payload_size;
            }
            CHECK(bytes <= cap);
            const Amount got = TotalFee(t);
            CHECK(got <= best);

            // Without a size conflict (every eligible tx fits) greedy is optimal.
            uint64_t eligible = 0;
            for (const auto& tx : txs)
                if (MeetsFeerate(tx, floor)) eligible += tx.payload_size;
            if (eligible <= cap) CHECK(got == best);
            exact += got == best;
        }
        CHECK(exact > 100);
    }

    TEST_CASE("template monotonicity in fee floor and byte cap")
    {
        Rng rng(8);
        for (int trial = 0; trial < 200; ++trial) {
            Mempool pool;
            for (int i = 0; i < 20; ++i)
                pool.Add(MakeTx(trial * 100 + i, 1 + static_cast<uint32_t>(rng.Below(40)), static_cast<Amount>(rng.Below(400))));
            const uint64_t cap = 20 + rng.Below(200);
            Amount prev = std::numeric_limits<Amount>::max();
            for (double floor = 0; floor <= 12; floor += 0.5) {
                const Amount fee = TotalFee(BuildBlockTemplate(pool, cap, floor));
                CHECK(fee <= prev);
                prev = fee;
            }
            prev = 0;
            for (uint64_t c = 1; c <= pool.total_bytes(); ++c) {
                const Amount fee = TotalFee(BuildBlockTemplate(pool, c, 1.0));
                REQUIRE(fee >= prev);
                prev = fee;
            }
        }
    }

    TEST_CASE("profit and fork utility")
    {
        CHECK(MinerProfit(50, 0, 0) == 50);
        CHECK(MinerProfit(0, 0, 10) == -10);
        CHECK(ForkUtility({0, 5, 5}) == -10);
        CHECK(ForkUtility({42.5, 0, 0}) == 42.5);
        CHECK(ForkUtility({100, 60, 50}) == -10);
        CHECK_THROWS_AS(ForkUtility({std::nan(""), 0, 0}), std::invalid_argument);
    }

    TEST_CASE("private attack race")
    {
        Rng rng(9);
        for (int i = 0; i < 1000; ++i) CHECK_FALSE(RunPrivateAttack(1.0, 0.0, 1, 1000, rng));
        CHECK_THROWS_AS(RunPrivateAttack(0.5, 0.4, 1, 10, rng), std::invalid_argument);
        CHECK_THROWS_AS(RunPrivateAttack(0.5, 0.5, 0, 10, rng), std::invalid_argument);

        // Majority attacker: win frequency rises toward 1 with the horizon.
        double prev = 0;
        for (uint64_t horizon : {10u, 40u, 200u}) {
            int wins = 0;
            for (int i = 0; i < 5000; ++i) wins += RunPrivateAttack(0.4, 0.6, 6, horizon, rng);
            const double rate = wins / 5000.0;
            CHECK(rate > prev);
            prev = rate;
        }
        CHECK(prev > 0.98);

        int wins = 0;
        const int trials = 50000;
        for (int i = 0; i < trials; ++i) wins += RunPrivateAttack(0.7, 0.3, 6, 5000, rng);
        const double p = wins / static_cast<double>(trials);
        const double se = std::sqrt(p * (1 - p) / trials);
        CHECK(std::abs(p - oracle::CatchUpProbability(0.3, 6)) <= 2 * se);
    }
}
