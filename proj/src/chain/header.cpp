// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <evsim/chain/header.hpp>

#include <evsim/chain/work.hpp>
#include <evsim/util/hex.hpp>

#include <algorithm>
#include <stdexcept>

namespace evsim {

namespace {

void PutLE32(uint8_t* p, uint32_t v)
{
    for (int i = 0; i < 4; ++i) p[i] = static_cast<uint8_t>(v >> (8 * i));
}

uint32_t GetLE32(const uint8_t* p)
{
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(p[i]) << (8 * i);
    return v;
}

} // namespace

HeaderBytes BlockHeader::Serialize() const
{
    HeaderBytes out{};
    PutLE32(out.data(), static_cast<uint32_t>(version));
    std::copy(prev_hash.bytes().begin(), prev_hash.bytes().end(), out.begin() + 4);
    std::copy(merkle_root.bytes().begin(), merkle_root.bytes().end(), out.begin() + 36);
    PutLE32(out.data() + 68, timestamp);
    PutLE32(out.data() + 72, bits);
    PutLE32(out.data() + 76, nonce);
    return out;
}

BlockHeader BlockHeader::Deserialize(std::span<const uint8_t> bytes)
{
    if (bytes.size() != kHeaderSize) {
        throw std::invalid_argument("block header must be 80 bytes, got " + std::to_string(bytes.size()));
    }
    BlockHeader h;
    h.version = static_cast<int32_t>(GetLE32(bytes.data()));
    h.prev_hash = Hash256(bytes.subspan<4, 32>());
    h.merkle_root = Hash256(bytes.subspan<36, 32>());
    h.timestamp = GetLE32(bytes.data() + 68);
    h.bits = GetLE32(bytes.data() + 72);
    h.nonce = GetLE32(bytes.data() + 76);
    return h;
}

std::string BlockHeader::ToHex() const
{
    return evsim::ToHex(Serialize());
}

BlockHeader BlockHeader::FromHex(std::string_view hex)
{
    if (hex.size() != 2 * kHeaderSize) {
        throw std::invalid_argument("block header hex must be 160 characters, got " + std::to_string(hex.size()));
    }
    return Deserialize(ParseHex(hex));
}

Hash256 BlockHeader::GetHash() const
{
    return Sha256d(Serialize());
}

bool CheckProofOfWork(const BlockHeader& header)
{
    return MeetsTarget(header.GetHash(), DecodeCompact(header.bits));
}

bool VerifyHeaderLink(const BlockHeader& child, const Hash256& parent_hash)
{
    // Decode first so a malformed target is reported even on a broken link.
    const Uint256 target = DecodeCompact(child.bits);
    if (child.prev_hash != parent_hash) return false;
    return MeetsTarget(child.GetHash(), target);
}

} // namespace evsim
