// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <evsim/chain/hash.hpp>

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace evsim {

inline constexpr size_t kHeaderSize = 80;

using HeaderBytes = std::array<uint8_t, kHeaderSize>;

/**
 * The 80-byte header. Integer fields are little-endian on the wire and the
 * two hash fields are written in internal byte order.
 */
struct BlockHeader {
    int32_t version = 0;
    Hash256 prev_hash;
    Hash256 merkle_root;
    uint32_t timestamp = 0;
    uint32_t bits = 0;
    uint32_t nonce = 0;

    HeaderBytes Serialize() const;
    /// Throws std::invalid_argument unless exactly 80 bytes are given.
    static BlockHeader Deserialize(std::span<const uint8_t> bytes);

    /// 160 hex characters of the wire serialization.
    std::string ToHex() const;
    static BlockHeader FromHex(std::string_view hex);

    /// Double SHA-256 of the serialization.
    Hash256 GetHash() const;

    friend bool operator==(const BlockHeader&, const BlockHeader&) = default;
};

/**
 * True iff child.prev_hash equals parent_hash and the child's digest is below
 * the target encoded in child.bits. A malformed bits field throws
 * TargetError instead of returning false.
 */
bool VerifyHeaderLink(const BlockHeader& child, const Hash256& parent_hash);

/// Proof-of-work half of VerifyHeaderLink. Throws TargetError on malformed bits.
bool CheckProofOfWork(const BlockHeader& header);

} // namespace evsim
