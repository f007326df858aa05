// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <evsim/chain/hash.hpp>

#include <cstdint>
#include <span>

namespace evsim {

/// Monetary amount in the smallest indivisible unit.
using Amount = int64_t;

/// A transaction reduced to what block assembly and SPV need: its commitment, size and fee.
struct Transaction {
    Hash256 id;
    uint32_t payload_size = 1;
    Amount fee = 0;

    /// id = Sha256d(payload), size = payload length.
    static Transaction FromPayload(std::span<const uint8_t> payload, Amount fee);

    friend bool operator==(const Transaction&, const Transaction&) = default;
};

/// Structural well-formedness: non-empty payload and non-negative fee.
inline bool IsWellFormed(const Transaction& tx) { return tx.payload_size >= 1 && tx.fee >= 0; }

/**
 * Compares fee/size ratios exactly by cross-multiplication.
 * Returns <0, 0, >0 like strcmp for a's feerate against b's.
 */
int CompareFeerate(const Transaction& a, const Transaction& b);

} // namespace evsim
