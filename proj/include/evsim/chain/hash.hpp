// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>

namespace evsim {

/**
 * 32-byte digest stored in internal (wire) byte order.
 *
 * Hex display follows the block-hash convention: the bytes are printed in
 * reverse, so a header hash that meets a difficulty target shows its leading
 * zeros first.
 */
class Hash256
{
public:
    static constexpr size_t kSize = 32;

    constexpr Hash256() = default;
    explicit Hash256(std::span<const uint8_t, kSize> bytes);

    /// Parses the reversed (display) hex form. Throws std::invalid_argument.
    static Hash256 FromHex(std::string_view hex);
    std::string ToHex() const;

    bool IsNull() const;

    const uint8_t* data() const { return bytes_.data(); }
    uint8_t* data() { return bytes_.data(); }
    std::span<const uint8_t, kSize> bytes() const { return bytes_; }
    uint8_t& operator[](size_t i) { return bytes_[i]; }
    uint8_t operator[](size_t i) const { return bytes_[i]; }

    friend bool operator==(const Hash256&, const Hash256&) = default;
    friend auto operator<=>(const Hash256&, const Hash256&) = default;

private:
    std::array<uint8_t, kSize> bytes_{};
};

Hash256 Sha256(std::span<const uint8_t> data);

/// SHA-256 applied twice.
Hash256 Sha256d(std::span<const uint8_t> data);

/// Sha256d(left || right), the interior Merkle node rule.
Hash256 HashPair(const Hash256& left, const Hash256& right);

} // namespace evsim

template <>
struct std::hash<evsim::Hash256> {
    size_t operator()(const evsim::Hash256& h) const noexcept
    {
        // Digests are uniformly distributed; the first word is a fine bucket key.
        size_t v = 0;
        for (size_t i = 0; i < sizeof(size_t); ++i) v |= static_cast<size_t>(h[i]) << (8 * i);
        return v;
    }
};
