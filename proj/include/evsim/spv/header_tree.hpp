// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <evsim/chain/header.hpp>
#include <evsim/chain/work.hpp>

#include <cstdint>
#include <set>
#include <unordered_map>
#include <vector>

namespace evsim {

struct HeaderNode {
    BlockHeader header;
    Hash256 hash;
    Hash256 parent; // null for the root
    uint64_t height = 0;
    WorkAmount cumulative_work;
    uint64_t receipt_order = 0;
};

/**
 * Append-only store of every connected header, stale branches included.
 *
 * The tree tracks the heaviest tip as headers arrive. A new tip replaces the
 * current best only with strictly more cumulative work, so of two equal tips
 * the one connected first stays best.
 */
class HeaderTree
{
public:
    /// The root is trusted as given; its own work counts toward every chain.
    explicit HeaderTree(const BlockHeader& root);

    const Hash256& genesis_hash() const { return best_chain_.front(); }
    const Hash256& best_tip() const { return best_chain_.back(); }
    uint64_t best_height() const { return best_chain_.size() - 1; }
    size_t size() const { return order_.size(); }

    const HeaderNode* Find(const Hash256& hash) const;
    const HeaderNode& Get(const Hash256& hash) const;
    bool Contains(const Hash256& hash) const { return nodes_.count(hash) != 0; }

    /**
     * Connects a header whose parent is present. The caller has already
     * checked proof-of-work. Returns true if the best tip changed.
     */
    bool Append(const BlockHeader& header, const Hash256& hash);

    bool OnBestChain(const Hash256& hash) const;

    /// Hash at the given height of the best chain.
    const Hash256& BestChainAt(uint64_t height) const { return best_chain_.at(height); }
    const std::vector<Hash256>& best_chain() const { return best_chain_; }

    /// Hashes in connection order.
    const std::vector<Hash256>& order() const { return order_; }
    const std::set<Hash256>& tips() const { return tips_; }

    /// Tips ordered by the time they were connected.
    std::vector<Hash256> TipsByReceipt() const;

private:
    std::unordered_map<Hash256, HeaderNode> nodes_;
    std::vector<Hash256> order_;
    std::set<Hash256> tips_;
    std::vector<Hash256> best_chain_;
};

} // namespace evsim
