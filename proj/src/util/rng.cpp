// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <evsim/util/rng.hpp>

#include <evsim/chain/hash.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace evsim {

uint64_t Rng::DeriveSeed(uint64_t seed, std::string_view label)
{
    std::vector<uint8_t> buf(8 + label.size());
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<uint8_t>(seed >> (8 * i));
    for (size_t i = 0; i < label.size(); ++i) buf[8 + i] = static_cast<uint8_t>(label[i]);
    const Hash256 digest = Sha256d(buf);
    uint64_t out = 0;
    for (int i = 0; i < 8; ++i) out |= static_cast<uint64_t>(digest.data()[i]) << (8 * i);
    return out;
}

Rng Rng::Derive(uint64_t seed, std::string_view label)
{
    return Rng(DeriveSeed(seed, label));
}

uint64_t Rng::Below(uint64_t n)
{
    if (n == 0) throw std::invalid_argument("Rng::Below: empty range");
    // Rejection sampling on the top of the range keeps the draw unbiased.
    const uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
    uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

double Rng::Exponential(double rate)
{
    if (!(rate > 0.0)) throw std::invalid_argument("Rng::Exponential: rate must be positive");
    return -std::log1p(-Uniform01()) / rate;
}

double Rng::Normal()
{
    const double u1 = 1.0 - Uniform01(); // (0, 1]
    const double u2 = Uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace evsim
