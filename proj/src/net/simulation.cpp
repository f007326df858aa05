// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <evsim/net/simulation.hpp>

#include <evsim/econ/mempool.hpp>
#include <evsim/util/rng.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace evsim {

namespace {

void PutLE(std::vector<uint8_t>& buf, uint64_t v)
{
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void PutTag(std::vector<uint8_t>& buf, std::string_view tag)
{
    buf.insert(buf.end(), tag.begin(), tag.end());
}

constexpr uint32_t kGenesisIndex = 0;

} // namespace

double BlockParams::ResolvedTxRate() const
{
    if (tx_rate > 0.0) return tx_rate;
    return 1.1 * static_cast<double>(max_bytes) / (static_cast<double>(avg_tx_bytes) * target_interval_s);
}

size_t BlockParams::ResolvedMempoolCap() const
{
    if (mempool_max_txs > 0) return mempool_max_txs;
    return std::max<size_t>(1000, 4 * (max_bytes / avg_tx_bytes));
}

uint64_t BlockParams::BudgetFor(double upstream_bandwidth) const
{
    if (propagation_budget_ms <= 0.0) return max_bytes;
    const double cap = std::floor(upstream_bandwidth * propagation_budget_ms / 1000.0);
    return std::min<uint64_t>(max_bytes, static_cast<uint64_t>(std::max(0.0, cap)));
}

Transaction SimTransaction(uint64_t seed, uint64_t index, uint32_t size)
{
    std::vector<uint8_t> buf;
    PutTag(buf, "tx");
    PutLE(buf, seed);
    PutLE(buf, index);
    Transaction tx;
    tx.id = Sha256d(buf);
    tx.payload_size = size;
    tx.fee = static_cast<Amount>(size) * (1 + tx.id[0] % 10);
    return tx;
}

Transaction SimCoinbase(uint64_t seed, uint64_t block_seq, NodeId producer)
{
    std::vector<uint8_t> buf;
    PutTag(buf, "coinbase");
    PutLE(buf, seed);
    PutLE(buf, block_seq);
    PutLE(buf, producer);
    Transaction tx;
    tx.id = Sha256d(buf);
    tx.payload_size = kCoinbaseBytes;
    tx.fee = 0;
    return tx;
}

SimTime TxArrival(uint64_t index, double tx_rate)
{
    return static_cast<SimTime>(std::floor(static_cast<double>(index) * 1e6 / tx_rate));
}

BlockHeader SimGenesis(uint32_t bits)
{
    static constexpr std::string_view kTag = "evsim genesis";
    BlockHeader h;
    h.version = 1;
    h.merkle_root = Sha256d(std::span(reinterpret_cast<const uint8_t*>(kTag.data()), kTag.size()));
    h.bits = bits;
    const auto nonce = GrindNonce(h, 0);
    if (!nonce) throw NonceExhaustedError("no genesis nonce");
    h.nonce = *nonce;
    return h;
}

Block SimResult::FullBlock(size_t i) const
{
    const BlockRecord& rec = blocks.at(i);
    Block b;
    b.header = rec.header;
    b.transactions.reserve(block_txs[i].size() + 1);
    b.transactions.push_back(SimCoinbase(seed, i, rec.producer));
    for (uint64_t t : block_txs[i]) b.transactions.push_back(SimTransaction(seed, t, avg_tx_bytes));
    return b;
}

namespace {

enum class EventKind { kBlockFound, kDeliverHeader, kDeliverBlock };

struct Event {
    SimTime time = 0;
    uint64_t seq = 0;
    EventKind kind = EventKind::kBlockFound;
    uint32_t block = 0;
    NodeId from = kNoNode;
    NodeId to = kNoNode;
    bool poisson = false;
    bool in_horizon = true;

    bool operator>(const Event& o) const { return time != o.time ? time > o.time : seq > o.seq; }
};

struct SimBlock {
    BlockRecord rec;
    uint32_t parent = 0;
    std::vector<uint64_t> txs;
};

struct MinerState {
    NodeId node = 0;
    size_t roster = 0;
    Mempool pool;
    uint64_t next_tx = 0;
    uint32_t tip = kGenesisIndex;
    std::vector<char> have; // per block index
    std::vector<char> connected;
    std::unordered_multimap<uint32_t, uint32_t> waiting; // parent -> child
    std::vector<SimTime> full_dist;
    std::vector<SimTime> overlay_dist;
};

class Engine
{
public:
    explicit Engine(const SimConfig& cfg);
    SimResult Run();

private:
    void Push(Event e)
    {
        e.seq = seq_++;
        queue_.push(e);
    }

    double Bandwidth(NodeId v) const { return bandwidth_[v]; }
    SimTime Serialize(uint64_t bytes, double bw) const
    {
        return static_cast<SimTime>(std::llround(static_cast<double>(bytes) * 1e6 / bw));
    }
    SimTime PathDelay(NodeId u, NodeId v, uint64_t bytes);
    /// Latency from a roster miner: the miner overlay for miner targets, the full graph otherwise.
    SimTime MinerDistance(const MinerState& m, NodeId v) const;

    Transaction Tx(uint64_t i);
    void PullTxs(MinerState& m, SimTime now);
    void Produce(size_t roster, SimTime now, bool in_horizon);
    void OnHeader(NodeId to, NodeId from, uint32_t block, SimTime now, bool pull_orphans);
    void OnBlock(NodeId to, uint32_t block, SimTime now);
    void Relay(NodeId v, uint32_t block, NodeId exclude, SimTime now);
    void SendHeader(NodeId u, NodeId w, uint32_t block, SimTime at);
    void Book(NodeId u, NodeId w, uint64_t bytes);
    void ConnectAvailable(MinerState& m, uint32_t block, SimTime now);
    void SwitchTip(MinerState& m, uint32_t new_tip);
    bool Converged() const;
    void ScheduleNextFound(SimTime now, bool poisson, bool in_horizon);

    const SimConfig& cfg_;
    NetworkGraph graph_;
    size_t n_;
    Rng pow_rng_;
    std::vector<Rng> gossip_rng_;
    double tx_rate_;
    size_t mempool_cap_;
    uint32_t bits_;
    BlockHeader genesis_;

    std::vector<double> bandwidth_;
    std::vector<int> roster_of_; // node -> roster index or -1
    std::vector<MinerState> miners_;
    std::vector<SpvClient> clients_;
    std::vector<SimBlock> blocks_;
    std::unordered_map<Hash256, uint32_t> index_;
    std::vector<size_t> header_msg_;
    std::vector<size_t> block_msg_;
    PropagationTrace trace_;
    std::unordered_set<uint64_t> pulled_;
    std::unordered_map<NodeId, std::vector<SimTime>> dist_cache_;

    std::deque<Transaction> tx_cache_;
    uint64_t tx_cache_base_ = 0;
    uint64_t tx_generated_ = 0;

    std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
    uint64_t seq_ = 0;
    SimTime now_ = 0;
};

Engine::Engine(const SimConfig& cfg)
    : cfg_(cfg),
      graph_(cfg.graph),
      n_(cfg.graph.node_count()),
      pow_rng_(Rng::Derive(cfg.seed, "pow")),
      tx_rate_(cfg.block.ResolvedTxRate()),
      mempool_cap_(cfg.block.ResolvedMempoolCap()),
      bits_(cfg.pow.EffectiveBits()),
      genesis_(SimGenesis(bits_))
{
    ValidateRoster(cfg.miners);
    cfg.relay.Validate();
    if (cfg.duration < 0) throw std::invalid_argument("duration must be non-negative");
    if (!(cfg.block.target_interval_s > 0.0)) throw std::invalid_argument("block.target_interval_s must be positive");
    if (cfg.block.avg_tx_bytes == 0) throw std::invalid_argument("block.avg_tx_bytes must be positive");
    if (!(cfg.observer_bandwidth > 0.0)) throw std::invalid_argument("observer bandwidth must be positive");
    if (!(tx_rate_ > 0.0) || !std::isfinite(tx_rate_)) throw std::invalid_argument("block.tx_rate must be positive");

    roster_of_.assign(n_, -1);
    for (NodeId v = 0; v < n_; ++v) graph_.SetRole(v, NodeRole::kObserver);
    for (size_t i = 0; i < cfg.miners.size(); ++i) {
        const NodeId id = cfg.miners[i].id;
        if (id >= n_) throw RosterError("miners[" + std::to_string(i) + "].id", "not a node of the graph");
        if (roster_of_[id] >= 0) throw RosterError("miners[" + std::to_string(i) + "].id", "duplicate node");
        roster_of_[id] = static_cast<int>(i);
        graph_.SetRole(id, NodeRole::kMiner);
    }
    for (const ScriptedBlock& s : cfg.scripted)
        if (s.miner >= n_ || roster_of_[s.miner] < 0) throw std::invalid_argument("scripted block by a non-miner node");

    bandwidth_.assign(n_, cfg.observer_bandwidth);
    std::vector<char> miner_mask(n_, 0);
    for (const MinerAgent& a : cfg.miners) {
        bandwidth_[a.id] = a.upstream_bandwidth;
        miner_mask[a.id] = 1;
    }

    // Full blocks ride the miner overlay when the miners form a connected
    // subgraph; otherwise they take the best path through the whole graph.
    bool overlay_connected = !cfg.miners.empty();
    std::vector<std::vector<SimTime>> overlay(cfg.miners.size());
    for (size_t i = 0; i < cfg.miners.size(); ++i) {
        overlay[i] = graph_.ShortestLatencies(cfg.miners[i].id, miner_mask);
        for (const MinerAgent& b : cfg.miners)
            if (overlay[i][b.id] < 0) overlay_connected = false;
    }

    miners_.resize(cfg.miners.size());
    for (size_t i = 0; i < cfg.miners.size(); ++i) {
        MinerState& m = miners_[i];
        m.node = cfg.miners[i].id;
        m.roster = i;
        m.full_dist = graph_.ShortestLatencies(m.node);
        m.overlay_dist = overlay_connected ? std::move(overlay[i]) : m.full_dist;
        m.have.push_back(1);
        m.connected.push_back(1);
    }

    gossip_rng_.reserve(n_);
    for (NodeId v = 0; v < n_; ++v)
        gossip_rng_.push_back(Rng::Derive(cfg.seed, "gossip/" + std::to_string(v)));

    clients_.assign(n_, SpvClient(genesis_, cfg.k_paths));

    SimBlock g;
    g.rec.header = genesis_;
    g.rec.hash = genesis_.GetHash();
    g.parent = kGenesisIndex;
    blocks_.push_back(std::move(g));
    index_.emplace(blocks_[0].rec.hash, kGenesisIndex);
    header_msg_.push_back(SIZE_MAX);
    block_msg_.push_back(SIZE_MAX);

    trace_.roles.resize(n_);
    for (NodeId v = 0; v < n_; ++v) trace_.roles[v] = graph_.role(v);
    trace_.bytes_sent.assign(n_, 0);
}

SimTime Engine::MinerDistance(const MinerState& m, NodeId v) const
{
    return roster_of_[v] >= 0 ? m.overlay_dist[v] : m.full_dist[v];
}

SimTime Engine::PathDelay(NodeId u, NodeId v, uint64_t bytes)
{
    const SimTime ser = Serialize(bytes, std::min(Bandwidth(u), Bandwidth(v)));
    if (graph_.HasEdge(u, v)) return graph_.EdgeLatency(u, v) + ser;
    auto it = dist_cache_.find(u);
    if (it == dist_cache_.end()) it = dist_cache_.emplace(u, graph_.ShortestLatencies(u)).first;
    const SimTime d = it->second[v];
    return d < 0 ? -1 : d + ser;
}

Transaction Engine::Tx(uint64_t i)
{
    if (i >= tx_cache_base_ && i < tx_cache_base_ + tx_cache_.size()) return tx_cache_[i - tx_cache_base_];
    if (i == tx_cache_base_ + tx_cache_.size()) {
        tx_cache_.push_back(SimTransaction(cfg_.seed, i, cfg_.block.avg_tx_bytes));
        tx_generated_ = std::max(tx_generated_, i + 1);
        return tx_cache_.back();
    }
    return SimTransaction(cfg_.seed, i, cfg_.block.avg_tx_bytes);
}

void Engine::PullTxs(MinerState& m, SimTime now)
{
    bool added = false;
    while (TxArrival(m.next_tx, tx_rate_) <= now) {
        m.pool.Add(Tx(m.next_tx), m.next_tx);
        ++m.next_tx;
        added = true;
    }
    if (added) m.pool.TrimToSize(mempool_cap_);

    // Drop cached transactions every miner has already pulled.
    uint64_t low = UINT64_MAX;
    for (const MinerState& x : miners_) low = std::min(low, x.next_tx);
    while (!tx_cache_.empty() && tx_cache_base_ < low) {
        tx_cache_.pop_front();
        ++tx_cache_base_;
    }
}

void Engine::Book(NodeId u, NodeId w, uint64_t bytes)
{
    trace_.bytes_sent[u] += bytes;
    trace_.flows[{u, w}] += bytes;
}

void Engine::SendHeader(NodeId u, NodeId w, uint32_t block, SimTime at)
{
    Book(u, w, kHeaderSize);
    Event e;
    e.time = at;
    e.kind = EventKind::kDeliverHeader;
    e.block = block;
    e.from = u;
    e.to = w;
    Push(e);
}

void Engine::Relay(NodeId v, uint32_t block, NodeId exclude, SimTime now)
{
    const RelayKind kind = cfg_.relay.kind;
    if (kind == RelayKind::kMulticast) return; // the origin's single emission covers everyone

    // Header-only nodes pass headers on to each other but never feed miners.
    const bool observer = roster_of_[v] < 0;
    std::vector<const Neighbor*> targets;
    for (const Neighbor& nb : graph_.Neighbors(v)) {
        if (nb.node == exclude) continue;
        if (observer && roster_of_[nb.node] >= 0) continue;
        targets.push_back(&nb);
    }
    if (kind == RelayKind::kGossip && targets.size() > cfg_.relay.fanout) {
        Rng& rng = gossip_rng_[v];
        for (size_t i = 0; i < cfg_.relay.fanout; ++i) {
            const size_t j = i + static_cast<size_t>(rng.Below(targets.size() - i));
            std::swap(targets[i], targets[j]);
        }
        targets.resize(cfg_.relay.fanout);
    }
    for (const Neighbor* nb : targets) {
        const SimTime d = nb->latency + Serialize(kHeaderSize, std::min(Bandwidth(v), Bandwidth(nb->node)));
        SendHeader(v, nb->node, block, now + d);
    }
}

void Engine::OnHeader(NodeId to, NodeId from, uint32_t block, SimTime now, bool pull_orphans)
{
    const IngestResult r = clients_[to].Ingest(blocks_[block].rec.header, from, now);
    if (r.status == IngestStatus::kAccepted) {
        for (const Hash256& h : r.connected) {
            const uint32_t idx = index_.at(h);
            SimTime& first = trace_.messages[header_msg_[idx]].first_receipt[to];
            if (first == kNever) first = now;
            Relay(to, idx, from, now);
        }
        return;
    }
    if (r.reason != RejectReason::kOrphan || !pull_orphans || from == kNoNode) return;

    // Ask the sender for the missing parent, once per node and parent.
    const uint32_t parent = blocks_[block].parent;
    const uint64_t key = (static_cast<uint64_t>(to) << 32) | parent;
    if (!pulled_.insert(key).second) return;
    const SimTime d = PathDelay(from, to, kHeaderSize);
    if (d < 0) return;
    SendHeader(from, to, parent, now + d + (d - Serialize(kHeaderSize, std::min(Bandwidth(from), Bandwidth(to)))));
}

void Engine::SwitchTip(MinerState& m, uint32_t new_tip)
{
    uint32_t a = m.tip;
    uint32_t b = new_tip;
    std::vector<uint32_t> disconnected;
    std::vector<uint32_t> connected;
    while (blocks_[a].rec.height > blocks_[b].rec.height) {
        disconnected.push_back(a);
        a = blocks_[a].parent;
    }
    while (blocks_[b].rec.height > blocks_[a].rec.height) {
        connected.push_back(b);
        b = blocks_[b].parent;
    }
    while (a != b) {
        disconnected.push_back(a);
        connected.push_back(b);
        a = blocks_[a].parent;
        b = blocks_[b].parent;
    }
    for (uint32_t d : disconnected)
        for (uint64_t t : blocks_[d].txs) m.pool.Add(Tx(t), t);
    for (uint32_t c : connected)
        for (uint64_t t : blocks_[c].txs) m.pool.Remove(Tx(t).id);
    if (!disconnected.empty()) m.pool.TrimToSize(mempool_cap_);
    m.tip = new_tip;
}

void Engine::ConnectAvailable(MinerState& m, uint32_t block, SimTime now)
{
    (void)now;
    if (!m.connected[blocks_[block].parent]) {
        m.waiting.emplace(blocks_[block].parent, block);
        return;
    }
    std::vector<uint32_t> stack{block};
    while (!stack.empty()) {
        const uint32_t b = stack.back();
        stack.pop_back();
        m.connected[b] = 1;
        // Ties keep the block connected first.
        const auto& tree = clients_[m.node].tree();
        if (tree.Get(blocks_[b].rec.hash).cumulative_work > tree.Get(blocks_[m.tip].rec.hash).cumulative_work)
            SwitchTip(m, b);
        auto [lo, hi] = m.waiting.equal_range(b);
        for (auto it = lo; it != hi; ++it) stack.push_back(it->second);
        m.waiting.erase(lo, hi);
    }
}

void Engine::OnBlock(NodeId to, uint32_t block, SimTime now)
{
    MinerState& m = miners_[static_cast<size_t>(roster_of_[to])];
    if (m.have[block]) return;
    PullTxs(m, now);
    if (cfg_.validate_blocks) {
        const SimBlock& sb = blocks_[block];
        Block full;
        full.header = sb.rec.header;
        full.transactions.push_back(SimCoinbase(cfg_.seed, block - 1, sb.rec.producer));
        for (uint64_t t : sb.txs) full.transactions.push_back(Tx(t));
        const BlockValidation v = ValidateBlock(full, sb.rec.header.prev_hash);
        if (!v) throw std::logic_error(std::string("simulated block failed validation: ") + ToString(v.reason));
    }
    m.have[block] = 1;
    trace_.messages[block_msg_[block]].first_receipt[to] = now;
    OnHeader(to, blocks_[block].rec.producer, block, now, false);
    ConnectAvailable(m, block, now);
}

void Engine::Produce(size_t roster, SimTime now, bool in_horizon)
{
    MinerState& m = miners_[roster];
    const MinerAgent& agent = cfg_.miners[roster];
    PullTxs(m, now);

    const uint64_t budget = cfg_.block.BudgetFor(agent.upstream_bandwidth);
    const uint64_t overhead = kHeaderSize + kCoinbaseBytes;
    const uint64_t cap = budget > overhead ? budget - overhead : 0;

    const uint32_t idx = static_cast<uint32_t>(blocks_.size());
    SimBlock sb;
    sb.parent = m.tip;
    std::vector<Hash256> leaves;
    leaves.push_back(SimCoinbase(cfg_.seed, idx - 1, m.node).id);
    uint64_t payload = kCoinbaseBytes;
    for (const MempoolEntry* e : SelectTemplateEntries(m.pool, cap, agent.min_feerate)) {
        sb.txs.push_back(e->tag);
        leaves.push_back(e->tx.id);
        sb.rec.fees += e->tx.fee;
        payload += e->tx.payload_size;
    }

    BlockHeader& h = sb.rec.header;
    h.version = 1;
    h.prev_hash = blocks_[m.tip].rec.hash;
    h.merkle_root = ComputeMerkleRoot(leaves);
    h.timestamp = static_cast<uint32_t>(now / kMicrosPerSecond);
    h.bits = bits_;
    const auto nonce = GrindNonce(h, 0);
    if (!nonce) throw NonceExhaustedError("no nonce for simulated block " + std::to_string(idx - 1));
    h.nonce = *nonce;

    sb.rec.hash = h.GetHash();
    sb.rec.parent = h.prev_hash;
    sb.rec.height = blocks_[m.tip].rec.height + 1;
    sb.rec.producer = m.node;
    sb.rec.found_time = now;
    sb.rec.tx_count = static_cast<uint32_t>(sb.txs.size());
    sb.rec.size_bytes = kHeaderSize + payload;
    sb.rec.reward = cfg_.block.subsidy + sb.rec.fees;
    sb.rec.in_horizon = in_horizon;
    blocks_.push_back(std::move(sb));
    index_.emplace(blocks_[idx].rec.hash, idx);
    for (MinerState& x : miners_) {
        x.have.push_back(0);
        x.connected.push_back(0);
    }

    const uint64_t size = blocks_[idx].rec.size_bytes;
    for (MessageKind kind : {MessageKind::kHeader, MessageKind::kBlock}) {
        MessageTrace msg;
        msg.kind = kind;
        msg.hash = blocks_[idx].rec.hash;
        msg.origin = m.node;
        msg.size_bytes = kind == MessageKind::kHeader ? kHeaderSize : size;
        msg.origin_time = now;
        msg.first_receipt.assign(n_, kNever);
        (kind == MessageKind::kHeader ? header_msg_ : block_msg_).push_back(trace_.messages.size());
        trace_.messages.push_back(std::move(msg));
    }

    // The producer holds its own block at once.
    m.have[idx] = 1;
    trace_.messages[block_msg_[idx]].first_receipt[m.node] = now;
    OnHeader(m.node, kNoNode, idx, now, false);
    ConnectAvailable(m, idx, now);

    const double bw = agent.upstream_bandwidth;
    if (cfg_.relay.kind == RelayKind::kMulticast) {
        const SimTime overhead_us = static_cast<SimTime>(std::llround(cfg_.relay.overhead_ms * kMicrosPerMilli));
        const uint64_t framing = cfg_.relay.overhead_bytes;
        Book(m.node, m.node, kHeaderSize + framing);
        Book(m.node, m.node, size + framing);
        for (NodeId w = 0; w < n_; ++w) {
            if (w == m.node) continue;
            const SimTime d = MinerDistance(m, w);
            if (d < 0) continue;
            Event e;
            e.kind = EventKind::kDeliverHeader;
            e.block = idx;
            e.from = m.node;
            e.to = w;
            e.time = now + overhead_us + Serialize(kHeaderSize + framing, bw) + d;
            Push(e);
            if (roster_of_[w] >= 0) {
                e.kind = EventKind::kDeliverBlock;
                e.time = now + overhead_us + Serialize(size + framing, bw) + d;
                Push(e);
            }
        }
        return;
    }

    for (const MinerState& x : miners_) {
        if (x.node == m.node || m.overlay_dist[x.node] < 0) continue;
        Book(m.node, x.node, size);
        Event e;
        e.kind = EventKind::kDeliverBlock;
        e.block = idx;
        e.from = m.node;
        e.to = x.node;
        e.time = now + m.overlay_dist[x.node] + Serialize(size, std::min(bw, Bandwidth(x.node)));
        Push(e);
        if (cfg_.relay.kind == RelayKind::kMinerDirect)
            SendHeader(m.node, x.node, idx,
                       now + m.overlay_dist[x.node] + Serialize(kHeaderSize, std::min(bw, Bandwidth(x.node))));
    }
}

bool Engine::Converged() const
{
    std::vector<const SpvClient*> ptrs;
    ptrs.reserve(clients_.size());
    for (const SpvClient& c : clients_) ptrs.push_back(&c);
    if (!ClientsConverged(ptrs)) return false;
    for (const MinerState& m : miners_)
        if (blocks_[m.tip].rec.hash != clients_[0].BestTip()) return false;
    return true;
}

void Engine::ScheduleNextFound(SimTime now, bool poisson, bool in_horizon)
{
    const double rate = 1.0 / cfg_.block.target_interval_s;
    const SimTime at = now + static_cast<SimTime>(std::llround(SampleBlockInterval(rate, pow_rng_) * kMicrosPerSecond));
    if (poisson && at >= cfg_.duration) return;
    Event e;
    e.time = at;
    e.kind = EventKind::kBlockFound;
    e.poisson = poisson;
    e.in_horizon = in_horizon;
    e.to = kNoNode;
    Push(e);
}

SimResult Engine::Run()
{
    if (cfg_.poisson_blocks && !miners_.empty()) ScheduleNextFound(0, true, true);
    for (const ScriptedBlock& s : cfg_.scripted) {
        Event e;
        e.time = s.time;
        e.kind = EventKind::kBlockFound;
        e.to = s.miner;
        e.in_horizon = s.time < cfg_.duration;
        Push(e);
    }

    size_t extension = 0;
    for (;;) {
        while (!queue_.empty()) {
            const Event e = queue_.top();
            queue_.pop();
            now_ = e.time;
            switch (e.kind) {
            case EventKind::kBlockFound: {
                size_t roster;
                if (e.to == kNoNode) {
                    roster = SampleProducerIndex(cfg_.miners, pow_rng_);
                } else {
                    roster = static_cast<size_t>(roster_of_[e.to]);
                }
                if (e.poisson) ScheduleNextFound(now_, true, true);
                Produce(roster, now_, e.in_horizon);
                break;
            }
            case EventKind::kDeliverHeader:
                OnHeader(e.to, e.from, e.block, now_, true);
                break;
            case EventKind::kDeliverBlock:
                OnBlock(e.to, e.block, now_);
                break;
            }
        }
        if (miners_.empty() || Converged() || extension >= cfg_.max_extension_blocks) break;
        ++extension;
        ScheduleNextFound(now_, false, false);
    }

    SimResult out;
    out.genesis = genesis_;
    out.seed = cfg_.seed;
    out.avg_tx_bytes = cfg_.block.avg_tx_bytes;
    out.tx_rate = tx_rate_;
    out.tx_generated = tx_generated_;
    out.extension_blocks = extension;
    out.end_time = now_;
    out.converged = miners_.empty() ? true : Converged();
    out.best_tip = clients_.empty() ? genesis_.GetHash() : clients_[0].BestTip();
    const HeaderTree* tree = clients_.empty() ? nullptr : &clients_[0].tree();
    for (size_t i = 1; i < blocks_.size(); ++i) {
        BlockRecord rec = blocks_[i].rec;
        rec.on_best_chain = tree && tree->Contains(rec.hash) && tree->OnBestChain(rec.hash);
        out.blocks.push_back(std::move(rec));
        out.block_txs.push_back(std::move(blocks_[i].txs));
    }
    out.trace = std::move(trace_);
    out.clients = std::move(clients_);
    return out;
}

} // namespace

SimResult RunSimulation(const SimConfig& config)
{
    Engine engine(config);
    return engine.Run();
}

} // namespace evsim
