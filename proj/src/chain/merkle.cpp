// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <evsim/chain/merkle.hpp>

#include <stdexcept>

namespace evsim {

namespace {

std::vector<Hash256> LeafIds(std::span<const Transaction> txs)
{
    std::vector<Hash256> ids;
    ids.reserve(txs.size());
    for (const Transaction& tx : txs) ids.push_back(tx.id);
    return ids;
}

void ReduceLevel(std::vector<Hash256>& level)
{
    const size_t pairs = (level.size() + 1) / 2;
    for (size_t i = 0; i < pairs; ++i) {
        const Hash256& left = level[2 * i];
        const Hash256& right = (2 * i + 1 < level.size()) ? level[2 * i + 1] : left;
        level[i] = HashPair(left, right);
    }
    level.resize(pairs);
}

} // namespace

Hash256 ComputeMerkleRoot(std::span<const Hash256> leaves)
{
    if (leaves.empty()) throw std::invalid_argument("merkle root of an empty leaf list");
    std::vector<Hash256> level(leaves.begin(), leaves.end());
    while (level.size() > 1) ReduceLevel(level);
    return level.front();
}

Hash256 ComputeMerkleRoot(std::span<const Transaction> txs)
{
    return ComputeMerkleRoot(LeafIds(txs));
}

MerkleProof BuildMerkleProof(std::span<const Hash256> leaves, uint64_t index)
{
    if (index >= leaves.size()) {
        throw std::out_of_range("merkle proof index " + std::to_string(index) + " out of range for " +
                                std::to_string(leaves.size()) + " leaves");
    }
    MerkleProof proof;
    proof.leaf_index = index;
    std::vector<Hash256> level(leaves.begin(), leaves.end());
    uint64_t pos = index;
    while (level.size() > 1) {
        const uint64_t sibling = pos ^ 1;
        proof.siblings.push_back(sibling < level.size() ? level[sibling] : level[pos]);
        ReduceLevel(level);
        pos >>= 1;
    }
    return proof;
}

MerkleProof BuildMerkleProof(std::span<const Transaction> txs, uint64_t index)
{
    return BuildMerkleProof(LeafIds(txs), index);
}

bool VerifyMerkleProof(const Hash256& leaf, const MerkleProof& proof, const Hash256& root)
{
    if (proof.siblings.size() < 64 && (proof.leaf_index >> proof.siblings.size()) != 0) return false;
    Hash256 node = leaf;
    uint64_t pos = proof.leaf_index;
    for (const Hash256& sibling : proof.siblings) {
        if (pos & 1) {
            if (sibling == node) return false;
            node = HashPair(sibling, node);
        } else {
            node = HashPair(node, sibling);
        }
        pos >>= 1;
    }
    return node == root;
}

} // namespace evsim
