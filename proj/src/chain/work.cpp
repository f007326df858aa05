// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <evsim/chain/work.hpp>

#include <fmt/format.h>

namespace evsim {

using boost::multiprecision::cpp_int;

Uint256 DecodeCompact(uint32_t bits)
{
    const int size = static_cast<int>(bits >> 24);
    uint32_t word = bits & 0x007fffff;
    Uint256 target;
    if (size <= 3) {
        word >>= 8 * (3 - size);
        target = word;
    } else {
        target = word;
        target <<= 8 * (size - 3);
    }
    if (word != 0 && (bits & 0x00800000) != 0) {
        throw TargetError(fmt::format("compact target 0x{:08x} is negative", bits));
    }
    if (word != 0 && (size > 34 || (word > 0xff && size > 33) || (word > 0xffff && size > 32))) {
        throw TargetError(fmt::format("compact target 0x{:08x} overflows 256 bits", bits));
    }
    if (target == 0) {
        throw TargetError(fmt::format("compact target 0x{:08x} is zero", bits));
    }
    return target;
}

uint32_t EncodeCompact(const Uint256& target)
{
    if (target == 0) return 0;
    int size = static_cast<int>((boost::multiprecision::msb(target) + 1 + 7) / 8);
    uint32_t compact;
    if (size <= 3) {
        compact = static_cast<uint32_t>(target) << (8 * (3 - size));
    } else {
        compact = static_cast<uint32_t>(Uint256(target >> (8 * (size - 3))));
    }
    if (compact & 0x00800000) {
        compact >>= 8;
        ++size;
    }
    return compact | (static_cast<uint32_t>(size) << 24);
}

Uint256 HashToUint256(const Hash256& digest)
{
    Uint256 v;
    for (int i = static_cast<int>(Hash256::kSize) - 1; i >= 0; --i) {
        v <<= 8;
        v |= digest[static_cast<size_t>(i)];
    }
    return v;
}

bool MeetsTarget(const Hash256& digest, const Uint256& target)
{
    return HashToUint256(digest) < target;
}

WorkAmount::WorkAmount(cpp_int value) : value_(std::move(value))
{
    if (value_ < 0) throw std::invalid_argument("WorkAmount must be non-negative");
}

std::string WorkAmount::ToHex() const
{
    if (value_ == 0) return "0";
    std::string out;
    cpp_int v = value_;
    static constexpr char kDigits[] = "0123456789abcdef";
    while (v > 0) {
        out.insert(out.begin(), kDigits[static_cast<unsigned>(v & 0xf)]);
        v >>= 4;
    }
    return out;
}

WorkAmount WorkFromTarget(const Uint256& target)
{
    if (target == 0) throw TargetError("work is undefined for a zero target");
    const cpp_int two256 = cpp_int(1) << 256;
    return WorkAmount(two256 / (cpp_int(target) + 1));
}

WorkAmount WorkFromBits(uint32_t bits)
{
    return WorkFromTarget(DecodeCompact(bits));
}

} // namespace evsim
