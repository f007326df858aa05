// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <evsim/chain/header.hpp>
#include <evsim/chain/work.hpp>

#include <cstdint>
#include <span>
#include <vector>

namespace evsim {

/// A header chain as received, with the order in which its tip arrived.
struct ChainCandidate {
    std::vector<BlockHeader> headers;
    uint64_t received_seq = 0;
};

struct CandidateWork {
    WorkAmount work;
    uint64_t received_seq = 0;
};

/// Sum of per-header work. Throws TargetError on malformed bits.
WorkAmount ChainWork(std::span<const BlockHeader> headers);

/**
 * Index of the candidate with strictly greatest work; among equal-work
 * candidates the one with the smallest received_seq wins, independent of
 * list order. Throws std::invalid_argument on an empty list.
 */
size_t SelectMaxWork(std::span<const CandidateWork> candidates);

/**
 * As SelectMaxWork over ChainWork of each candidate. Every candidate must be
 * internally linked with valid proof-of-work; std::invalid_argument otherwise.
 */
size_t SelectBestChain(std::span<const ChainCandidate> candidates);

} // namespace evsim
