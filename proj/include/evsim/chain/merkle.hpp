// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <evsim/chain/hash.hpp>
#include <evsim/chain/transaction.hpp>

#include <cstdint>
#include <span>
#include <vector>

namespace evsim {

/// Inclusion path: the sibling at each level from leaf to root.
struct MerkleProof {
    uint64_t leaf_index = 0;
    std::vector<Hash256> siblings;

    friend bool operator==(const MerkleProof&, const MerkleProof&) = default;
};

/**
 * Binary tree over the leaves; each interior node is Sha256d(left || right)
 * and a level with an odd count pairs its last node with itself.
 * Throws std::invalid_argument for an empty leaf list.
 */
Hash256 ComputeMerkleRoot(std::span<const Hash256> leaves);
Hash256 ComputeMerkleRoot(std::span<const Transaction> txs);

/// Throws std::out_of_range when index >= number of leaves.
MerkleProof BuildMerkleProof(std::span<const Hash256> leaves, uint64_t index);
MerkleProof BuildMerkleProof(std::span<const Transaction> txs, uint64_t index);

/**
 * Recomputes the root from a leaf and its path.
 *
 * The odd-node duplication rule means a node can legitimately be paired with
 * itself only as a left child. A proof that pairs a right child with an
 * identical sibling is rejected, so flipping any bit of leaf_index always
 * fails verification.
 */
bool VerifyMerkleProof(const Hash256& leaf, const MerkleProof& proof, const Hash256& root);

} // namespace evsim
