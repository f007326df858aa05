// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <evsim/chain/transaction.hpp>
#include <evsim/util/rng.hpp>
#include <evsim/util/types.hpp>

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace evsim {

/// Block subsidy in smallest units (50 coins of 1e8 units).
inline constexpr Amount kDefaultSubsidy = 5000000000;

struct MinerAgent {
    NodeId id = 0;
    double alpha = 0.0;
    double upstream_bandwidth = 0.0; // bytes per second
    double min_feerate = 0.0;        // units per byte
    Amount electricity_cost = 0;     // per block interval
    Amount hardware_cost = 0;        // per block interval

    Amount CostPerInterval() const { return electricity_cost + hardware_cost; }
};

/// Roster validation failure; field() names the offending entry.
class RosterError : public std::invalid_argument
{
public:
    RosterError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field))
    {
    }
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/**
 * Requires a non-empty roster with unique ids, alpha in [0, 1], positive
 * bandwidth, non-negative fee floor, and shares summing to 1 within 1e-9.
 */
void ValidateRoster(std::span<const MinerAgent> miners);

/// Index into miners, drawn with probability alpha. Throws on an empty roster.
size_t SampleProducerIndex(std::span<const MinerAgent> miners, Rng& rng);
NodeId SampleNextProducer(std::span<const MinerAgent> miners, Rng& rng);

/// Exponential waiting time in seconds with mean 1/total_rate.
double SampleBlockInterval(double total_rate, Rng& rng);

inline Amount MinerProfit(Amount reward, Amount fees, Amount costs) { return reward + fees - costs; }

struct ForkUtilityParams {
    double delta_profit = 0.0;
    double infra_depreciation = 0.0;
    double migration_risk = 0.0;
};

/// delta_profit - infra_depreciation - migration_risk; positive means forking pays.
/// Throws std::invalid_argument on a non-finite field.
double ForkUtility(const ForkUtilityParams& p);

/**
 * One private-chain race. The attacker starts z blocks behind; each block
 * goes to the attacker with probability attacker_alpha. Returns true once the
 * attacker's chain has at least the honest chain's work, within at most
 * horizon blocks found in total.
 */
bool RunPrivateAttack(double honest_alpha, double attacker_alpha, int z, uint64_t horizon, Rng& rng);

} // namespace evsim
