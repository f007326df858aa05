// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace evsim {

/**
 * Seeded generator used by every stochastic component.
 *
 * The engine is std::mt19937_64, whose output sequence is fixed by the
 * standard. The distributions are implemented here rather than taken from
 * <random>, because the standard leaves distribution algorithms to the
 * library vendor and simulation logs must be identical across toolchains.
 */
class Rng
{
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    /// Independent stream for a named purpose, derived from a parent seed.
    static Rng Derive(uint64_t seed, std::string_view label);
    static uint64_t DeriveSeed(uint64_t seed, std::string_view label);

    uint64_t Next() { return engine_(); }

    /// Uniform on [0, 1) with 53 bits of resolution.
    double Uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer on [0, n). n must be positive.
    uint64_t Below(uint64_t n);

    /// Exponential with the given rate (mean 1/rate).
    double Exponential(double rate);

    /// Standard normal via Box-Muller.
    double Normal();

private:
    std::mt19937_64 engine_;
};

} // namespace evsim
