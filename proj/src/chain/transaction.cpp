// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <evsim/chain/transaction.hpp>

#include <stdexcept>

namespace evsim {

Transaction Transaction::FromPayload(std::span<const uint8_t> payload, Amount fee)
{
    if (payload.empty()) throw std::invalid_argument("transaction payload must be non-empty");
    if (payload.size() > UINT32_MAX) throw std::invalid_argument("transaction payload too large");
    return Transaction{Sha256d(payload), static_cast<uint32_t>(payload.size()), fee};
}

int CompareFeerate(const Transaction& a, const Transaction& b)
{
    const __int128 lhs = static_cast<__int128>(a.fee) * b.payload_size;
    const __int128 rhs = static_cast<__int128>(b.fee) * a.payload_size;
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

} // namespace evsim
