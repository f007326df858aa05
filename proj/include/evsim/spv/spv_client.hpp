// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <evsim/chain/merkle.hpp>
#include <evsim/spv/header_tree.hpp>
#include <evsim/util/types.hpp>

#include <nlohmann/json.hpp>

#include <deque>
#include <optional>
#include <set>
#include <span>
#include <unordered_map>
#include <vector>

namespace evsim {

/// Receipt source recorded for the root header.
inline constexpr NodeId kGenesisSource = kNoNode;

enum class IngestStatus { kAccepted, kDuplicate, kRejected };

enum class RejectReason { kNone, kPow, kBadTarget, kOrphan };

const char* ToString(IngestStatus s);
const char* ToString(RejectReason r);

struct IngestResult {
    IngestStatus status = IngestStatus::kRejected;
    RejectReason reason = RejectReason::kNone;
    /// Headers connected by this call: the header itself followed by any
    /// buffered descendants it released.
    std::vector<Hash256> connected;
    bool tip_changed = false;
};

struct Receipt {
    NodeId source = kNoNode;
    SimTime time = 0;
};

/// Every first-hop delivery of one header, in arrival order.
struct TrustAnchorEvidence {
    Hash256 header_hash;
    std::vector<Receipt> receipts;

    std::set<NodeId> FirstHopSources() const;
    std::vector<SimTime> ReceiptTimes() const;
};

enum class SpvStatus { kConfirmed, kNotOnBestChain, kInvalidProof, kUnknownBlock };

const char* ToString(SpvStatus s);

struct SpvResult {
    SpvStatus status = SpvStatus::kUnknownBlock;
    uint64_t depth = 0; // meaningful for kConfirmed only
};

struct StaleBranch {
    Hash256 fork_point;
    Hash256 tip;
    uint64_t length = 0;
    WorkAmount cumulative_work;
};

/**
 * Header-only client. Holds the header tree, per-header receipt evidence and
 * a bounded buffer of headers whose parent has not arrived yet.
 */
class SpvClient
{
public:
    static constexpr size_t kDefaultOrphanLimit = 1024;

    explicit SpvClient(const BlockHeader& genesis, size_t k_paths = 2, size_t orphan_limit = kDefaultOrphanLimit);

    IngestResult Ingest(const BlockHeader& header, NodeId source, SimTime time);

    const Hash256& BestTip() const { return tree_.best_tip(); }
    const HeaderTree& tree() const { return tree_; }
    size_t k_paths() const { return k_paths_; }
    size_t orphan_count() const { return orphans_.size(); }

    SpvResult VerifySpv(const Hash256& tx_id, const MerkleProof& proof, const Hash256& block_hash) const;

    /// Throws std::out_of_range for a header not in the tree.
    bool IsTrustAnchor(const Hash256& header_hash) const;

    const TrustAnchorEvidence* Evidence(const Hash256& header_hash) const;

    /// One entry per non-best tip, in the order the tips were connected.
    std::vector<StaleBranch> StaleBranches() const;

    /// {headers: [hex...], receipt: [{hash, source, time}...]}; the genesis
    /// header comes first and has no receipt entry.
    nlohmann::json ExportSnapshot() const;
    static SpvClient ImportSnapshot(const nlohmann::json& snapshot, size_t k_paths = 2);

private:
    struct Orphan {
        BlockHeader header;
        Hash256 hash;
        std::vector<Receipt> receipts;
    };

    void Connect(const BlockHeader& header, const Hash256& hash, std::vector<Receipt> receipts, IngestResult& result);
    void BufferOrphan(const BlockHeader& header, const Hash256& hash, Receipt receipt);

    HeaderTree tree_;
    size_t k_paths_;
    size_t orphan_limit_;
    std::unordered_map<Hash256, TrustAnchorEvidence> evidence_;
    std::unordered_map<Hash256, Orphan> orphans_;
    std::unordered_multimap<Hash256, Hash256> orphans_by_parent_;
    std::deque<Hash256> orphan_fifo_;
};

/// True iff every client reports the same best tip. Clients built on
/// different genesis headers throw std::invalid_argument.
bool ClientsConverged(std::span<const SpvClient* const> clients);

} // namespace evsim
