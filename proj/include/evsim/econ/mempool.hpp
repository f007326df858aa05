// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <evsim/chain/transaction.hpp>

#include <cstdint>
#include <set>
#include <unordered_map>
#include <vector>

namespace evsim {

struct MempoolEntry {
    Transaction tx;
    uint64_t tag = 0; // caller-defined handle, e.g. an index into a tx log
};

/// Highest feerate first, then ascending id.
struct FeerateOrder {
    bool operator()(const MempoolEntry& a, const MempoolEntry& b) const
    {
        const int c = CompareFeerate(a.tx, b.tx);
        if (c != 0) return c > 0;
        return a.tx.id < b.tx.id;
    }
};

class Mempool
{
public:
    using Set = std::set<MempoolEntry, FeerateOrder>;

    /// False if a transaction with the same id is already pending.
    bool Add(const Transaction& tx, uint64_t tag = 0);
    bool Remove(const Hash256& id);
    bool Contains(const Hash256& id) const { return index_.count(id) != 0; }

    size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    uint64_t total_bytes() const { return total_bytes_; }

    Set::const_iterator begin() const { return entries_.begin(); }
    Set::const_iterator end() const { return entries_.end(); }

    /// Evicts lowest-feerate entries until at most max_entries remain.
    void TrimToSize(size_t max_entries);

private:
    Set entries_;
    std::unordered_map<Hash256, Set::const_iterator> index_;
    uint64_t total_bytes_ = 0;
};

/// True iff fee / payload_size >= min_feerate.
inline bool MeetsFeerate(const Transaction& tx, double min_feerate)
{
    return static_cast<double>(tx.fee) >= min_feerate * static_cast<double>(tx.payload_size);
}

/**
 * Greedy template: walk the pool by descending feerate, stop at the first
 * entry below min_feerate, and take every entry that still fits in
 * max_block_bytes of payload.
 */
std::vector<const MempoolEntry*> SelectTemplateEntries(const Mempool& pool, uint64_t max_block_bytes,
                                                       double min_feerate);
std::vector<Transaction> BuildBlockTemplate(const Mempool& pool, uint64_t max_block_bytes, double min_feerate);

} // namespace evsim
