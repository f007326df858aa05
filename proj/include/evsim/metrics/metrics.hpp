// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <evsim/econ/miner.hpp>
#include <evsim/net/simulation.hpp>
#include <evsim/util/types.hpp>

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace evsim {

/// Shannon entropy in bits of the producer distribution. Throws
/// std::invalid_argument when the counts are empty or all zero.
double EntropyBits(const std::map<NodeId, uint64_t>& counts);

struct FinalityEstimate {
    double rate = 0.0;
    double stderr_ = 0.0;
    uint64_t trials = 0;
    int z = 0;
    double attacker_alpha = 0.0;
};

inline constexpr uint64_t kMinFinalityTrials = 100;

/**
 * Monte Carlo private-chain race against a z-confirmed payment. Trial i
 * draws from its own stream derived from (seed, i), so estimates taken at
 * different shares or depths over the same seed are coupled trial by trial.
 */
FinalityEstimate FinalityErrorRate(double attacker_alpha, int z, uint64_t trials, uint64_t horizon, uint64_t seed);

struct BlockObservation {
    uint32_t tx_count = 0;
    std::optional<double> t95_ms; // nullopt if the block never reached 95%
};

struct ThroughputReport {
    double tps = 0.0;
    uint64_t confirmed_txs = 0;
    size_t counted_blocks = 0;
    size_t total_blocks = 0;
    double tau_bound_ms = 0.0;
    double analytic_ceiling_tps = 0.0;
};

double AnalyticCeiling(uint64_t block_bytes, uint32_t avg_tx_bytes, double interval_s);

/// Transactions per second over duration_s, counting only blocks whose
/// propagation time is within tau_bound_ms.
ThroughputReport ThroughputC(std::span<const BlockObservation> blocks, double duration_s, double tau_bound_ms,
                             double analytic_ceiling_tps = 0.0);

/// Producers with at least one block over the number of nodes.
double ParticipationRatio(size_t node_count, std::span<const NodeId> producers);

enum class CoalitionMethod { kExhaustive, kGreedy };

const char* ToString(CoalitionMethod m);

struct CoalitionControlResult {
    double epsilon = 0.0;
    bool decentralised = true;
    std::optional<std::vector<NodeId>> violating_coalition;
    CoalitionMethod method = CoalitionMethod::kExhaustive;
};

inline constexpr size_t kExhaustiveCoalitionLimit = 20;

/**
 * Looks for a coalition E with |E| < epsilon * |miners| whose shares sum
 * past one half. Rosters up to kExhaustiveCoalitionLimit are searched
 * exhaustively, larger ones greedily by descending share.
 */
CoalitionControlResult IsDecentralised(std::span<const MinerAgent> miners, double epsilon);
CoalitionControlResult IsDecentralisedGreedy(std::span<const MinerAgent> miners, double epsilon);

/// Each node's share of all bytes sent. Throws std::invalid_argument when
/// no bytes were sent.
std::vector<double> EconomicCentrality(const std::map<std::pair<NodeId, NodeId>, uint64_t>& flows, size_t node_count);

struct MetricsConfig {
    double epsilon_d = 0.3;     // coalition size bound as a fraction of miners
    double epsilon_s = 0.01;    // acceptable finality error
    int z = 6;
    double tau_bound_ms = 5000.0;
    double attacker_alpha = 0.3;
    uint64_t trials = 50000;
    uint64_t horizon = 2000;
    double t_secure_margin_ms = 0.0;

    /// Throws std::invalid_argument naming the metrics field at fault.
    void Validate() const;
};

struct MinerOutcome {
    NodeId id = 0;
    double alpha = 0.0;
    uint64_t blocks_found = 0;
    uint64_t best_chain_blocks = 0;
    Amount revenue = 0;
    Amount costs = 0;
    Amount profit = 0;
};

struct PropagationSummary {
    std::optional<double> header_t95_median_ms;
    std::optional<double> header_t95_max_ms;
    std::optional<double> header_t90_max_ms;
    std::optional<double> block_t90_max_ms; // miners only
    double t_secure_ms = 0.0;
};

struct MetricsReport {
    double d_entropy_bits = 0.0;
    std::map<NodeId, uint64_t> producer_counts; // best chain, in horizon
    double participation_ratio = 0.0;
    FinalityEstimate finality;
    bool secure = false;
    ThroughputReport throughput;
    CoalitionControlResult coalition;
    std::vector<double> centrality;
    PropagationSummary propagation;
    std::vector<MinerOutcome> miners;
    size_t blocks_total = 0;
    size_t stale_blocks = 0;
    bool converged = false;
    double duration_s = 0.0;
};

/// Time for a block to be held by 95% of all nodes (header) and 95% of
/// miners (full block), whichever is later.
std::optional<SimTime> BlockPropagationTime(const PropagationTrace& trace, const Hash256& hash, double fraction = 0.95);
std::optional<SimTime> BlockPropagationTime(const PropagationTrace& trace, const MessageTrace& header,
                                            const MessageTrace& block, double fraction = 0.95);

MetricsReport ComputeMetrics(const SimResult& result, const SimConfig& config, const MetricsConfig& metrics);

nlohmann::json ToJson(const MetricsReport& report);

struct PanelRow {
    std::string scenario;
    double d_bits = 0.0;
    double s_rate = 0.0;
    double s_stderr = 0.0;
    double c_tps = 0.0;
    double tau_ms = 0.0;
    bool decentralised = false;
    bool secure = false;
    bool scalable = false;

    bool joint() const { return decentralised && secure && scalable; }
};

struct PanelPoint {
    std::string label;
    MetricsReport report;
    double tau_ms = 0.0;
};

struct ScenarioSeries {
    std::string name;
    std::vector<PanelPoint> points; // sweep order
};

/// True when every point has positive throughput and throughput strictly
/// increases from one point to the next.
bool ScalableAcross(std::span<const double> throughput);

std::vector<PanelRow> TrilemmaPanel(std::span<const ScenarioSeries> scenarios);

inline constexpr const char* kPanelHeader = "scenario,D_bits,S_rate,S_stderr,C_tps,tau_ms,decentralised,secure,scalable,joint";

std::string PanelCsv(std::span<const PanelRow> rows);

} // namespace evsim
