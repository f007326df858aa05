// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <evsim/chain/block.hpp>
#include <evsim/econ/miner.hpp>
#include <evsim/net/graph.hpp>
#include <evsim/net/relay.hpp>
#include <evsim/net/trace.hpp>
#include <evsim/spv/spv_client.hpp>

#include <cstdint>
#include <vector>

namespace evsim {

struct PowParams {
    /// Abstract mode grinds every header against the easiest target so the
    /// header structure is real; concrete mode uses the configured bits.
    bool concrete = false;
    uint32_t bits = kEasyBits;

    uint32_t EffectiveBits() const { return concrete ? bits : kEasyBits; }
};

struct BlockParams {
    uint64_t max_bytes = 1000000;
    uint32_t avg_tx_bytes = 400;
    double target_interval_s = 600.0;
    /// When positive, a miner caps its block at upstream_bandwidth times
    /// this budget so one serialization fits inside it.
    double propagation_budget_ms = 0.0;
    /// Transactions per second; zero or negative selects 1.1 times the
    /// analytic ceiling max_bytes / (avg_tx_bytes * target_interval_s).
    double tx_rate = 0.0;
    Amount subsidy = kDefaultSubsidy;
    /// Zero selects four blocks' worth at max_bytes.
    size_t mempool_max_txs = 0;

    double ResolvedTxRate() const;
    size_t ResolvedMempoolCap() const;
    /// Block size limit for a miner with the given upstream bandwidth in bytes per second.
    uint64_t BudgetFor(double upstream_bandwidth) const;
};

inline constexpr uint32_t kCoinbaseBytes = 100;

struct ScriptedBlock {
    SimTime time = 0;
    NodeId miner = 0; // node id of a roster miner
};

struct SimConfig {
    NetworkGraph graph;
    std::vector<MinerAgent> miners; // ids are node ids in graph
    RelayStrategy relay;
    PowParams pow;
    BlockParams block;
    SimTime duration = 0;
    uint64_t seed = 0;
    double observer_bandwidth = 12500000.0; // bytes per second
    bool poisson_blocks = true;
    std::vector<ScriptedBlock> scripted;
    size_t max_extension_blocks = 100;
    /// Re-run the full block predicate on every delivered block.
    bool validate_blocks = false;
    size_t k_paths = 2;
};

struct BlockRecord {
    BlockHeader header;
    Hash256 hash;
    Hash256 parent;
    uint64_t height = 0;
    NodeId producer = 0;
    SimTime found_time = 0;
    uint32_t tx_count = 0; // excluding the coinbase
    uint64_t size_bytes = 0;
    Amount fees = 0;
    Amount reward = 0; // subsidy + fees credited to the producer
    bool in_horizon = true;
    bool on_best_chain = false;
};

struct SimResult {
    BlockHeader genesis;
    std::vector<BlockRecord> blocks; // in production order
    std::vector<std::vector<uint64_t>> block_txs; // generated-tx indices per block
    PropagationTrace trace;
    std::vector<SpvClient> clients; // one per node
    Hash256 best_tip;
    bool converged = false;
    size_t extension_blocks = 0;
    SimTime end_time = 0;
    uint64_t tx_generated = 0;
    double tx_rate = 0.0;
    uint64_t seed = 0;
    uint32_t avg_tx_bytes = 0;

    /// Rebuilds the full block, coinbase first.
    Block FullBlock(size_t i) const;
};

/// The i-th generated transaction of a run.
Transaction SimTransaction(uint64_t seed, uint64_t index, uint32_t size);
Transaction SimCoinbase(uint64_t seed, uint64_t block_seq, NodeId producer);
/// Arrival time of the i-th transaction at a constant rate.
SimTime TxArrival(uint64_t index, double tx_rate);
/// Root header shared by every run with the given bits.
BlockHeader SimGenesis(uint32_t bits);

/**
 * Runs the event loop until the queue drains. Blocks found after the
 * duration, or added afterwards while clients still disagree on the best
 * tip, are recorded with in_horizon = false.
 */
SimResult RunSimulation(const SimConfig& config);

} // namespace evsim
