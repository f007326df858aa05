// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <evsim/spv/header_tree.hpp>

#include <algorithm>
#include <stdexcept>

namespace evsim {

HeaderTree::HeaderTree(const BlockHeader& root)
{
    HeaderNode node;
    node.header = root;
    node.hash = root.GetHash();
    node.cumulative_work = WorkFromBits(root.bits);
    best_chain_.push_back(node.hash);
    order_.push_back(node.hash);
    tips_.insert(node.hash);
    nodes_.emplace(node.hash, std::move(node));
}

const HeaderNode* HeaderTree::Find(const Hash256& hash) const
{
    auto it = nodes_.find(hash);
    return it == nodes_.end() ? nullptr : &it->second;
}

const HeaderNode& HeaderTree::Get(const Hash256& hash) const
{
    const HeaderNode* node = Find(hash);
    if (!node) throw std::out_of_range("unknown header " + hash.ToHex());
    return *node;
}

bool HeaderTree::Append(const BlockHeader& header, const Hash256& hash)
{
    const HeaderNode& parent = Get(header.prev_hash);
    if (Contains(hash)) throw std::logic_error("header already connected");

    HeaderNode node;
    node.header = header;
    node.hash = hash;
    node.parent = header.prev_hash;
    node.height = parent.height + 1;
    node.cumulative_work = parent.cumulative_work + WorkFromBits(header.bits);
    node.receipt_order = order_.size();

    tips_.erase(header.prev_hash);
    tips_.insert(hash);
    order_.push_back(hash);
    const bool better = node.cumulative_work > Get(best_tip()).cumulative_work;
    nodes_.emplace(hash, std::move(node));
    if (!better) return false;

    // Rewind the best chain to the fork point, then replay the new branch.
    std::vector<Hash256> branch;
    const HeaderNode* cur = &Get(hash);
    while (!OnBestChain(cur->hash)) {
        branch.push_back(cur->hash);
        cur = &Get(cur->parent);
    }
    best_chain_.resize(cur->height + 1);
    best_chain_.insert(best_chain_.end(), branch.rbegin(), branch.rend());
    return true;
}

bool HeaderTree::OnBestChain(const Hash256& hash) const
{
    const HeaderNode* node = Find(hash);
    return node && node->height < best_chain_.size() && best_chain_[node->height] == hash;
}

std::vector<Hash256> HeaderTree::TipsByReceipt() const
{
    std::vector<Hash256> out(tips_.begin(), tips_.end());
    std::sort(out.begin(), out.end(), [this](const Hash256& a, const Hash256& b) {
        return Get(a).receipt_order < Get(b).receipt_order;
    });
    return out;
}

} // namespace evsim
