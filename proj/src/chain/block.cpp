// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <evsim/chain/block.hpp>

#include <evsim/chain/merkle.hpp>
#include <evsim/chain/work.hpp>

#include <unordered_set>

namespace evsim {

uint64_t Block::SizeBytes() const
{
    uint64_t total = kHeaderSize;
    for (const Transaction& tx : transactions) total += tx.payload_size;
    return total;
}

const char* ToString(BlockError e)
{
    switch (e) {
    case BlockError::kNone: return "ok";
    case BlockError::kBadPrev: return "bad-prev";
    case BlockError::kBadPow: return "bad-pow";
    case BlockError::kBadTarget: return "bad-target";
    case BlockError::kEmpty: return "empty";
    case BlockError::kMerkleMismatch: return "merkle-mismatch";
    case BlockError::kDuplicateTx: return "duplicate-tx";
    case BlockError::kMalformedTx: return "malformed-tx";
    }
    return "unknown";
}

BlockValidation ValidateBlock(const Block& block, const Hash256& parent_hash)
{
    const BlockHeader& h = block.header;
    Uint256 target;
    try {
        target = DecodeCompact(h.bits);
    } catch (const TargetError&) {
        return {BlockError::kBadTarget};
    }
    if (h.prev_hash != parent_hash) return {BlockError::kBadPrev};
    if (!MeetsTarget(h.GetHash(), target)) return {BlockError::kBadPow};
    if (block.transactions.empty()) return {BlockError::kEmpty};

    std::unordered_set<Hash256> seen;
    seen.reserve(block.transactions.size());
    for (const Transaction& tx : block.transactions) {
        if (!IsWellFormed(tx)) return {BlockError::kMalformedTx};
        if (!seen.insert(tx.id).second) return {BlockError::kDuplicateTx};
    }
    if (ComputeMerkleRoot(block.transactions) != h.merkle_root) return {BlockError::kMerkleMismatch};
    return {};
}

std::optional<uint32_t> GrindNonce(BlockHeader header, uint32_t nonce_start)
{
    const Uint256 target = DecodeCompact(header.bits);
    for (uint64_t n = nonce_start; n <= UINT32_MAX; ++n) {
        header.nonce = static_cast<uint32_t>(n);
        if (MeetsTarget(header.GetHash(), target)) return header.nonce;
    }
    return std::nullopt;
}

Block MineBlockConcrete(const Hash256& parent_hash, std::vector<Transaction> txs, uint32_t bits,
                        uint32_t nonce_start, uint32_t timestamp)
{
    Block block;
    block.header.version = 1;
    block.header.prev_hash = parent_hash;
    block.header.merkle_root = ComputeMerkleRoot(txs);
    block.header.timestamp = timestamp;
    block.header.bits = bits;
    block.transactions = std::move(txs);
    const std::optional<uint32_t> nonce = GrindNonce(block.header, nonce_start);
    if (!nonce) throw NonceExhaustedError("nonce space exhausted; lower the difficulty");
    block.header.nonce = *nonce;
    return block;
}

} // namespace evsim
