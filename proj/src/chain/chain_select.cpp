// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <evsim/chain/chain_select.hpp>

#include <stdexcept>

namespace evsim {

WorkAmount ChainWork(std::span<const BlockHeader> headers)
{
    WorkAmount total;
    for (const BlockHeader& h : headers) total += WorkFromBits(h.bits);
    return total;
}

size_t SelectMaxWork(std::span<const CandidateWork> candidates)
{
    if (candidates.empty()) throw std::invalid_argument("no candidate chains");
    size_t best = 0;
    for (size_t i = 1; i < candidates.size(); ++i) {
        const CandidateWork& c = candidates[i];
        const CandidateWork& b = candidates[best];
        if (c.work > b.work || (c.work == b.work && c.received_seq < b.received_seq)) best = i;
    }
    return best;
}

size_t SelectBestChain(std::span<const ChainCandidate> candidates)
{
    std::vector<CandidateWork> works;
    works.reserve(candidates.size());
    for (size_t c = 0; c < candidates.size(); ++c) {
        const auto& headers = candidates[c].headers;
        for (size_t i = 0; i < headers.size(); ++i) {
            const bool linked = i == 0 || headers[i].prev_hash == headers[i - 1].GetHash();
            if (!linked || !CheckProofOfWork(headers[i])) {
                throw std::invalid_argument("candidate " + std::to_string(c) + " is not link-valid at header " +
                                            std::to_string(i));
            }
        }
        works.push_back({ChainWork(headers), candidates[c].received_seq});
    }
    return SelectMaxWork(works);
}

} // namespace evsim
