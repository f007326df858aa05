// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <evsim/econ/miner.hpp>

#include <cmath>
#include <set>

namespace evsim {

void ValidateRoster(std::span<const MinerAgent> miners)
{
    if (miners.empty()) throw RosterError("miners", "roster is empty");
    std::set<NodeId> ids;
    double total = 0.0;
    for (size_t i = 0; i < miners.size(); ++i) {
        const MinerAgent& m = miners[i];
        const std::string at = "miners[" + std::to_string(i) + "]";
        if (!ids.insert(m.id).second) throw RosterError(at + ".id", "duplicate miner id " + std::to_string(m.id));
        if (!(m.alpha >= 0.0 && m.alpha <= 1.0)) throw RosterError(at + ".alpha", "must lie in [0, 1]");
        if (!(m.upstream_bandwidth > 0.0) || !std::isfinite(m.upstream_bandwidth))
            throw RosterError(at + ".bandwidth_bps", "must be positive");
        if (!(m.min_feerate >= 0.0)) throw RosterError(at + ".min_feerate", "must be non-negative");
        total += m.alpha;
    }
    if (std::abs(total - 1.0) > 1e-9) throw RosterError("miners.alpha", "shares sum to " + std::to_string(total) + ", expected 1");
}

size_t SampleProducerIndex(std::span<const MinerAgent> miners, Rng& rng)
{
    if (miners.empty()) throw std::invalid_argument("no miners to sample from");
    const double u = rng.Uniform01();
    double acc = 0.0;
    for (size_t i = 0; i < miners.size(); ++i) {
        acc += miners[i].alpha;
        if (u < acc) return i;
    }
    // Rounding can leave the cumulative sum just below 1; fall back to the
    // last miner with positive share.
    for (size_t i = miners.size(); i-- > 0;)
        if (miners[i].alpha > 0.0) return i;
    return miners.size() - 1;
}

NodeId SampleNextProducer(std::span<const MinerAgent> miners, Rng& rng)
{
    return miners[SampleProducerIndex(miners, rng)].id;
}

double SampleBlockInterval(double total_rate, Rng& rng)
{
    return rng.Exponential(total_rate);
}

double ForkUtility(const ForkUtilityParams& p)
{
    if (!std::isfinite(p.delta_profit) || !std::isfinite(p.infra_depreciation) || !std::isfinite(p.migration_risk))
        throw std::invalid_argument("fork utility inputs must be finite");
    return p.delta_profit - p.infra_depreciation - p.migration_risk;
}

bool RunPrivateAttack(double honest_alpha, double attacker_alpha, int z, uint64_t horizon, Rng& rng)
{
    if (std::abs(honest_alpha + attacker_alpha - 1.0) > 1e-9 || attacker_alpha < 0.0 || honest_alpha < 0.0)
        throw std::invalid_argument("attack shares must be non-negative and sum to 1");
    if (z < 1) throw std::invalid_argument("confirmation depth must be at least 1");

    int64_t deficit = z;
    for (uint64_t step = 0; step < horizon; ++step) {
        if (deficit > static_cast<int64_t>(horizon - step)) return false;
        deficit += rng.Uniform01() < attacker_alpha ? -1 : 1;
        if (deficit <= 0) return true;
    }
    return false;
}

} // namespace evsim
