// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <evsim/econ/mempool.hpp>

#include <iterator>

namespace evsim {

bool Mempool::Add(const Transaction& tx, uint64_t tag)
{
    if (Contains(tx.id)) return false;
    auto [it, inserted] = entries_.insert({tx, tag});
    index_.emplace(tx.id, it);
    total_bytes_ += tx.payload_size;
    return inserted;
}

bool Mempool::Remove(const Hash256& id)
{
    auto it = index_.find(id);
    if (it == index_.end()) return false;
    total_bytes_ -= it->second->tx.payload_size;
    entries_.erase(it->second);
    index_.erase(it);
    return true;
}

void Mempool::TrimToSize(size_t max_entries)
{
    while (entries_.size() > max_entries) {
        auto last = std::prev(entries_.end());
        total_bytes_ -= last->tx.payload_size;
        index_.erase(last->tx.id);
        entries_.erase(last);
    }
}

std::vector<const MempoolEntry*> SelectTemplateEntries(const Mempool& pool, uint64_t max_block_bytes,
                                                       double min_feerate)
{
    std::vector<const MempoolEntry*> out;
    uint64_t used = 0;
    for (const MempoolEntry& e : pool) {
        if (!MeetsFeerate(e.tx, min_feerate)) break;
        if (used + e.tx.payload_size > max_block_bytes) continue;
        used += e.tx.payload_size;
        out.push_back(&e);
        if (used == max_block_bytes) break;
    }
    return out;
}

std::vector<Transaction> BuildBlockTemplate(const Mempool& pool, uint64_t max_block_bytes, double min_feerate)
{
    std::vector<Transaction> out;
    for (const MempoolEntry* e : SelectTemplateEntries(pool, max_block_bytes, min_feerate)) out.push_back(e->tx);
    return out;
}

} // namespace evsim
