// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <evsim/chain/header.hpp>
#include <evsim/chain/transaction.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace evsim {

struct Block {
    BlockHeader header;
    std::vector<Transaction> transactions;

    Hash256 GetHash() const { return header.GetHash(); }
    /// Header plus the payload of every transaction.
    uint64_t SizeBytes() const;
};

enum class BlockError {
    kNone,
    kBadPrev,
    kBadPow,
    kBadTarget,
    kEmpty,
    kMerkleMismatch,
    kDuplicateTx,
    kMalformedTx,
};

const char* ToString(BlockError e);

struct BlockValidation {
    BlockError reason = BlockError::kNone;

    bool valid() const { return reason == BlockError::kNone; }
    explicit operator bool() const { return valid(); }
};

/**
 * Full block predicate: the header links to parent_hash and meets its target,
 * the transactions are non-empty, well-formed and unique, and their Merkle
 * root matches the header. Never throws; failures carry a reason.
 */
BlockValidation ValidateBlock(const Block& block, const Hash256& parent_hash);

class NonceExhaustedError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/**
 * Searches nonces upward from nonce_start (no wrap-around) for one that meets
 * header.bits. Returns the winning nonce or nullopt once the space is spent.
 */
std::optional<uint32_t> GrindNonce(BlockHeader header, uint32_t nonce_start);

/**
 * Builds and mines a block on parent_hash at the given difficulty. Intended
 * for easy targets only. Throws NonceExhaustedError when no nonce at or above
 * nonce_start succeeds.
 */
Block MineBlockConcrete(const Hash256& parent_hash, std::vector<Transaction> txs, uint32_t bits,
                        uint32_t nonce_start, uint32_t timestamp = 0);

} // namespace evsim
