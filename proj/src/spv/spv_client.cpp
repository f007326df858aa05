// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <evsim/spv/spv_client.hpp>

#include <algorithm>
#include <stdexcept>

namespace evsim {

const char* ToString(IngestStatus s)
{
    switch (s) {
    case IngestStatus::kAccepted: return "accept";
    case IngestStatus::kDuplicate: return "duplicate";
    case IngestStatus::kRejected: return "reject";
    }
    return "unknown";
}

const char* ToString(RejectReason r)
{
    switch (r) {
    case RejectReason::kNone: return "none";
    case RejectReason::kPow: return "pow";
    case RejectReason::kBadTarget: return "bad-target";
    case RejectReason::kOrphan: return "orphan";
    }
    return "unknown";
}

const char* ToString(SpvStatus s)
{
    switch (s) {
    case SpvStatus::kConfirmed: return "confirmed";
    case SpvStatus::kNotOnBestChain: return "not-on-best-chain";
    case SpvStatus::kInvalidProof: return "invalid-proof";
    case SpvStatus::kUnknownBlock: return "unknown-block";
    }
    return "unknown";
}

std::set<NodeId> TrustAnchorEvidence::FirstHopSources() const
{
    std::set<NodeId> out;
    for (const Receipt& r : receipts) out.insert(r.source);
    return out;
}

std::vector<SimTime> TrustAnchorEvidence::ReceiptTimes() const
{
    std::vector<SimTime> out;
    out.reserve(receipts.size());
    for (const Receipt& r : receipts) out.push_back(r.time);
    return out;
}

SpvClient::SpvClient(const BlockHeader& genesis, size_t k_paths, size_t orphan_limit)
    : tree_(genesis), k_paths_(k_paths), orphan_limit_(orphan_limit)
{
    evidence_[tree_.genesis_hash()] = {tree_.genesis_hash(), {{kGenesisSource, 0}}};
}

IngestResult SpvClient::Ingest(const BlockHeader& header, NodeId source, SimTime time)
{
    IngestResult result;
    const Hash256 hash = header.GetHash();

    if (auto it = evidence_.find(hash); it != evidence_.end()) {
        it->second.receipts.push_back({source, time});
        result.status = IngestStatus::kDuplicate;
        return result;
    }
    if (auto it = orphans_.find(hash); it != orphans_.end()) {
        it->second.receipts.push_back({source, time});
        result.reason = RejectReason::kOrphan;
        return result;
    }

    try {
        if (!MeetsTarget(hash, DecodeCompact(header.bits))) {
            result.reason = RejectReason::kPow;
            return result;
        }
    } catch (const TargetError&) {
        result.reason = RejectReason::kBadTarget;
        return result;
    }

    if (!tree_.Contains(header.prev_hash)) {
        BufferOrphan(header, hash, {source, time});
        result.reason = RejectReason::kOrphan;
        return result;
    }

    result.status = IngestStatus::kAccepted;
    Connect(header, hash, {{source, time}}, result);
    return result;
}

void SpvClient::Connect(const BlockHeader& header, const Hash256& hash, std::vector<Receipt> receipts,
                        IngestResult& result)
{
    // Iterative so that a long buffered chain cannot exhaust the stack.
    std::vector<Orphan> pending{{header, hash, std::move(receipts)}};
    while (!pending.empty()) {
        Orphan next = std::move(pending.back());
        pending.pop_back();
        result.tip_changed |= tree_.Append(next.header, next.hash);
        result.connected.push_back(next.hash);
        evidence_[next.hash] = {next.hash, std::move(next.receipts)};

        auto [lo, hi] = orphans_by_parent_.equal_range(next.hash);
        std::vector<Hash256> children;
        for (auto it = lo; it != hi; ++it) children.push_back(it->second);
        orphans_by_parent_.erase(lo, hi);
        // Release children in arrival order; the stack pops from the back.
        std::sort(children.begin(), children.end(), [this](const Hash256& a, const Hash256& b) {
            return std::find(orphan_fifo_.begin(), orphan_fifo_.end(), a) <
                   std::find(orphan_fifo_.begin(), orphan_fifo_.end(), b);
        });
        for (auto it = children.rbegin(); it != children.rend(); ++it) {
            auto node = orphans_.extract(*it);
            orphan_fifo_.erase(std::find(orphan_fifo_.begin(), orphan_fifo_.end(), *it));
            pending.push_back(std::move(node.mapped()));
        }
    }
}

void SpvClient::BufferOrphan(const BlockHeader& header, const Hash256& hash, Receipt receipt)
{
    if (orphan_limit_ == 0) return;
    if (orphans_.size() >= orphan_limit_) {
        const Hash256 oldest = orphan_fifo_.front();
        orphan_fifo_.pop_front();
        const Hash256 parent = orphans_.at(oldest).header.prev_hash;
        auto [lo, hi] = orphans_by_parent_.equal_range(parent);
        for (auto it = lo; it != hi; ++it) {
            if (it->second == oldest) {
                orphans_by_parent_.erase(it);
                break;
            }
        }
        orphans_.erase(oldest);
    }
    orphans_.emplace(hash, Orphan{header, hash, {receipt}});
    orphans_by_parent_.emplace(header.prev_hash, hash);
    orphan_fifo_.push_back(hash);
}

SpvResult SpvClient::VerifySpv(const Hash256& tx_id, const MerkleProof& proof, const Hash256& block_hash) const
{
    const HeaderNode* node = tree_.Find(block_hash);
    if (!node) return {SpvStatus::kUnknownBlock};
    if (!VerifyMerkleProof(tx_id, proof, node->header.merkle_root)) return {SpvStatus::kInvalidProof};
    if (!tree_.OnBestChain(block_hash)) return {SpvStatus::kNotOnBestChain};
    return {SpvStatus::kConfirmed, tree_.best_height() - node->height};
}

bool SpvClient::IsTrustAnchor(const Hash256& header_hash) const
{
    auto it = evidence_.find(header_hash);
    if (it == evidence_.end()) throw std::out_of_range("unknown header " + header_hash.ToHex());
    return it->second.FirstHopSources().size() >= k_paths_ && tree_.OnBestChain(header_hash);
}

const TrustAnchorEvidence* SpvClient::Evidence(const Hash256& header_hash) const
{
    auto it = evidence_.find(header_hash);
    return it == evidence_.end() ? nullptr : &it->second;
}

std::vector<StaleBranch> SpvClient::StaleBranches() const
{
    std::vector<StaleBranch> out;
    for (const Hash256& tip : tree_.TipsByReceipt()) {
        if (tip == tree_.best_tip()) continue;
        StaleBranch b;
        b.tip = tip;
        b.cumulative_work = tree_.Get(tip).cumulative_work;
        Hash256 cur = tip;
        while (!tree_.OnBestChain(cur)) {
            ++b.length;
            cur = tree_.Get(cur).parent;
        }
        b.fork_point = cur;
        out.push_back(b);
    }
    return out;
}

nlohmann::json SpvClient::ExportSnapshot() const
{
    nlohmann::json headers = nlohmann::json::array();
    nlohmann::json receipt = nlohmann::json::array();
    for (const Hash256& h : tree_.order()) headers.push_back(tree_.Get(h).header.ToHex());
    // First receipts in connection order rebuild the same tree and best tip;
    // the remaining receipts only add evidence.
    for (size_t pass = 0; pass < 2; ++pass) {
        for (const Hash256& h : tree_.order()) {
            if (h == tree_.genesis_hash()) continue;
            const auto& receipts = evidence_.at(h).receipts;
            for (size_t i = pass == 0 ? 0 : 1; i < (pass == 0 ? 1 : receipts.size()); ++i) {
                receipt.push_back({{"hash", h.ToHex()}, {"source", receipts[i].source}, {"time", receipts[i].time}});
            }
        }
    }
    return {{"headers", headers}, {"receipt", receipt}};
}

SpvClient SpvClient::ImportSnapshot(const nlohmann::json& snapshot, size_t k_paths)
{
    const auto& headers = snapshot.at("headers");
    if (headers.empty()) throw std::invalid_argument("snapshot has no headers");
    std::unordered_map<Hash256, BlockHeader> by_hash;
    for (const auto& hex : headers) {
        const BlockHeader h = BlockHeader::FromHex(hex.get<std::string>());
        by_hash.emplace(h.GetHash(), h);
    }
    SpvClient client(BlockHeader::FromHex(headers.front().get<std::string>()), k_paths);
    for (const auto& r : snapshot.at("receipt")) {
        const Hash256 hash = Hash256::FromHex(r.at("hash").get<std::string>());
        auto it = by_hash.find(hash);
        if (it == by_hash.end()) throw std::invalid_argument("receipt for header not in snapshot: " + hash.ToHex());
        client.Ingest(it->second, r.at("source").get<NodeId>(), r.at("time").get<SimTime>());
    }
    return client;
}

bool ClientsConverged(std::span<const SpvClient* const> clients)
{
    if (clients.empty()) return true;
    const Hash256& genesis = clients.front()->tree().genesis_hash();
    const Hash256& tip = clients.front()->BestTip();
    bool same = true;
    for (const SpvClient* c : clients) {
        if (c->tree().genesis_hash() != genesis) throw std::invalid_argument("clients do not share a genesis header");
        same = same && c->BestTip() == tip;
    }
    return same;
}

} // namespace evsim
