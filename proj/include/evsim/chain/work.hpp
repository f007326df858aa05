// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <evsim/chain/hash.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace evsim {

using Uint256 = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<
    256, 256, boost::multiprecision::unsigned_magnitude, boost::multiprecision::unchecked, void>>;

/// A compact "bits" field that does not decode to a usable target.
class TargetError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Decodes the 4-byte compact target. Negative, overflowing and zero targets throw TargetError.
Uint256 DecodeCompact(uint32_t bits);

/// Inverse of DecodeCompact for any target it can produce.
uint32_t EncodeCompact(const Uint256& target);

/// Interprets a digest as a little-endian 256-bit integer.
Uint256 HashToUint256(const Hash256& digest);

/// Proof-of-work predicate: numeric digest strictly below target.
bool MeetsTarget(const Hash256& digest, const Uint256& target);

/// Non-negative, arbitrary-precision amount of work; sums never overflow.
class WorkAmount
{
public:
    WorkAmount() = default;
    explicit WorkAmount(boost::multiprecision::cpp_int value);
    static WorkAmount FromUint64(uint64_t v) { return WorkAmount(boost::multiprecision::cpp_int(v)); }

    WorkAmount& operator+=(const WorkAmount& other)
    {
        value_ += other.value_;
        return *this;
    }
    friend WorkAmount operator+(WorkAmount a, const WorkAmount& b) { return a += b; }
    friend bool operator==(const WorkAmount& a, const WorkAmount& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const WorkAmount& a, const WorkAmount& b)
    {
        const int c = a.value_.compare(b.value_);
        return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }

    const boost::multiprecision::cpp_int& value() const { return value_; }
    std::string ToString() const { return value_.str(); }
    /// Lowercase hex without prefix, at least one digit.
    std::string ToHex() const;
    /// Approximate value, for reporting only.
    double ToDouble() const { return value_.convert_to<double>(); }

private:
    boost::multiprecision::cpp_int value_;
};

/// floor(2^256 / (target + 1)). Throws TargetError for a zero target.
WorkAmount WorkFromTarget(const Uint256& target);
WorkAmount WorkFromBits(uint32_t bits);

/// Target for the easiest practical difficulty, roughly one success per two attempts.
inline constexpr uint32_t kEasyBits = 0x207fffff;

} // namespace evsim
