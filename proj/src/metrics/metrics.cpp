// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <evsim/metrics/metrics.hpp>

#include <evsim/util/rng.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace evsim {

double EntropyBits(const std::map<NodeId, uint64_t>& counts)
{
    uint64_t total = 0;
    for (const auto& [id, c] : counts) total += c;
    if (total == 0) throw std::invalid_argument("entropy of an empty producer distribution");
    double h = 0.0;
    for (const auto& [id, c] : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

FinalityEstimate FinalityErrorRate(double attacker_alpha, int z, uint64_t trials, uint64_t horizon, uint64_t seed)
{
    if (trials < kMinFinalityTrials)
        throw std::invalid_argument(fmt::format("finality estimate needs at least {} trials", kMinFinalityTrials));
    const uint64_t base = Rng::DeriveSeed(seed, "finality");
    uint64_t wins = 0;
    for (uint64_t i = 0; i < trials; ++i) {
        Rng rng(Rng::DeriveSeed(base, std::to_string(i)));
        wins += RunPrivateAttack(1.0 - attacker_alpha, attacker_alpha, z, horizon, rng) ? 1 : 0;
    }
    FinalityEstimate out;
    out.trials = trials;
    out.z = z;
    out.attacker_alpha = attacker_alpha;
    out.rate = static_cast<double>(wins) / static_cast<double>(trials);
    out.stderr_ = std::sqrt(out.rate * (1.0 - out.rate) / static_cast<double>(trials));
    return out;
}

double AnalyticCeiling(uint64_t block_bytes, uint32_t avg_tx_bytes, double interval_s)
{
    return static_cast<double>(block_bytes) / (static_cast<double>(avg_tx_bytes) * interval_s);
}

ThroughputReport ThroughputC(std::span<const BlockObservation> blocks, double duration_s, double tau_bound_ms,
                             double analytic_ceiling_tps)
{
    if (!(duration_s > 0.0)) throw std::invalid_argument("throughput needs a positive duration");
    ThroughputReport r;
    r.total_blocks = blocks.size();
    r.tau_bound_ms = tau_bound_ms;
    r.analytic_ceiling_tps = analytic_ceiling_tps;
    for (const BlockObservation& b : blocks) {
        if (!b.t95_ms || *b.t95_ms > tau_bound_ms) continue;
        r.confirmed_txs += b.tx_count;
        ++r.counted_blocks;
    }
    r.tps = static_cast<double>(r.confirmed_txs) / duration_s;
    return r;
}

double ParticipationRatio(size_t node_count, std::span<const NodeId> producers)
{
    if (node_count == 0) throw std::invalid_argument("participation ratio of an empty network");
    const std::set<NodeId> distinct(producers.begin(), producers.end());
    return static_cast<double>(distinct.size()) / static_cast<double>(node_count);
}

const char* ToString(CoalitionMethod m)
{
    return m == CoalitionMethod::kExhaustive ? "exhaustive" : "greedy";
}

namespace {

size_t MaxCoalitionSize(size_t n, double epsilon)
{
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1]");
    // Largest integer strictly below epsilon * n.
    const double bound = epsilon * static_cast<double>(n);
    const double below = std::ceil(bound - 1e-12) - 1.0;
    return below < 0.0 ? 0 : static_cast<size_t>(below);
}

} // namespace

CoalitionControlResult IsDecentralisedGreedy(std::span<const MinerAgent> miners, double epsilon)
{
    CoalitionControlResult r;
    r.epsilon = epsilon;
    r.method = CoalitionMethod::kGreedy;
    const size_t limit = MaxCoalitionSize(miners.size(), epsilon);
    std::vector<size_t> order(miners.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return miners[a].alpha > miners[b].alpha; });
    double sum = 0.0;
    std::vector<NodeId> taken;
    for (size_t i = 0; i < limit && i < order.size(); ++i) {
        sum += miners[order[i]].alpha;
        taken.push_back(miners[order[i]].id);
        if (sum > 0.5) {
            std::sort(taken.begin(), taken.end());
            r.decentralised = false;
            r.violating_coalition = taken;
            return r;
        }
    }
    return r;
}

CoalitionControlResult IsDecentralised(std::span<const MinerAgent> miners, double epsilon)
{
    if (miners.size() > kExhaustiveCoalitionLimit) return IsDecentralisedGreedy(miners, epsilon);
    CoalitionControlResult r;
    r.epsilon = epsilon;
    r.method = CoalitionMethod::kExhaustive;
    const size_t limit = MaxCoalitionSize(miners.size(), epsilon);
    const uint32_t n = static_cast<uint32_t>(miners.size());

    // Smallest violating coalition, ties broken by the lowest subset mask.
    std::optional<uint32_t> best;
    int best_size = 0;
    for (uint32_t mask = 1; mask < (1u << n); ++mask) {
        const int size = std::popcount(mask);
        if (static_cast<size_t>(size) > limit) continue;
        if (best && size >= best_size) continue;
        double sum = 0.0;
        for (uint32_t i = 0; i < n; ++i)
            if (mask & (1u << i)) sum += miners[i].alpha;
        if (sum > 0.5) {
            best = mask;
            best_size = size;
        }
    }
    if (best) {
        std::vector<NodeId> ids;
        for (uint32_t i = 0; i < n; ++i)
            if (*best & (1u << i)) ids.push_back(miners[i].id);
        std::sort(ids.begin(), ids.end());
        r.decentralised = false;
        r.violating_coalition = ids;
    }
    return r;
}

std::vector<double> EconomicCentrality(const std::map<std::pair<NodeId, NodeId>, uint64_t>& flows, size_t node_count)
{
    std::vector<double> rows(node_count, 0.0);
    double total = 0.0;
    for (const auto& [edge, w] : flows) {
        if (edge.first >= node_count) throw std::out_of_range("flow from an unknown node");
        rows[edge.first] += static_cast<double>(w);
        total += static_cast<double>(w);
    }
    if (total <= 0.0) throw std::invalid_argument("centrality of an all-zero flow matrix");
    for (double& v : rows) v /= total;
    return rows;
}

void MetricsConfig::Validate() const
{
    if (!(epsilon_d > 0.0 && epsilon_d <= 1.0)) throw std::invalid_argument("metrics.epsilon_D_coalition must lie in (0, 1]");
    if (!(epsilon_s > 0.0 && epsilon_s <= 1.0)) throw std::invalid_argument("metrics.epsilon_S must lie in (0, 1]");
    if (z < 1) throw std::invalid_argument("metrics.z must be at least 1");
    if (!(tau_bound_ms > 0.0)) throw std::invalid_argument("metrics.tau_bound_ms must be positive");
    if (!(attacker_alpha >= 0.0 && attacker_alpha <= 1.0)) throw std::invalid_argument("metrics.attacker_alpha must lie in [0, 1]");
    if (trials < kMinFinalityTrials) throw std::invalid_argument("metrics.trials must be at least 100");
    if (horizon < 1) throw std::invalid_argument("metrics.horizon must be positive");
}

std::optional<SimTime> BlockPropagationTime(const PropagationTrace& trace, const MessageTrace& header,
                                            const MessageTrace& block, double fraction)
{
    const auto h = TimeToFraction(trace, header, fraction);
    const auto b = TimeToFraction(trace, block, fraction);
    if (!h || !b) return std::nullopt;
    return std::max(*h, *b);
}

std::optional<SimTime> BlockPropagationTime(const PropagationTrace& trace, const Hash256& hash, double fraction)
{
    return BlockPropagationTime(trace, trace.Find(MessageKind::kHeader, hash), trace.Find(MessageKind::kBlock, hash),
                                fraction);
}

namespace {

std::optional<double> Ms(std::optional<SimTime> t)
{
    if (!t) return std::nullopt;
    return ToMillis(*t);
}

} // namespace

MetricsReport ComputeMetrics(const SimResult& result, const SimConfig& config, const MetricsConfig& metrics)
{
    metrics.Validate();
    MetricsReport r;
    r.duration_s = static_cast<double>(config.duration) / kMicrosPerSecond;
    r.converged = result.converged;
    r.blocks_total = result.blocks.size();

    std::unordered_map<Hash256, std::pair<const MessageTrace*, const MessageTrace*>> by_hash;
    for (const MessageTrace& m : result.trace.messages)
        (m.kind == MessageKind::kHeader ? by_hash[m.hash].first : by_hash[m.hash].second) = &m;

    std::vector<BlockObservation> observed;
    std::vector<NodeId> producers;
    std::map<NodeId, MinerOutcome> outcomes;
    for (const MinerAgent& m : config.miners) outcomes[m.id] = {m.id, m.alpha};
    for (const BlockRecord& b : result.blocks) {
        producers.push_back(b.producer);
        MinerOutcome& o = outcomes[b.producer];
        ++o.blocks_found;
        if (!b.on_best_chain) ++r.stale_blocks;
        if (!b.on_best_chain || !b.in_horizon) continue;
        ++o.best_chain_blocks;
        o.revenue += b.reward;
        ++r.producer_counts[b.producer];
        const auto& [header, block] = by_hash.at(b.hash);
        observed.push_back({b.tx_count, Ms(BlockPropagationTime(result.trace, *header, *block))});
    }

    r.d_entropy_bits = r.producer_counts.empty() ? 0.0 : EntropyBits(r.producer_counts);
    r.participation_ratio = ParticipationRatio(config.graph.node_count(), producers);

    r.finality = FinalityErrorRate(metrics.attacker_alpha, metrics.z, metrics.trials, metrics.horizon, config.seed);
    r.secure = r.finality.rate < metrics.epsilon_s;

    uint64_t widest = 0;
    for (const MinerAgent& m : config.miners) widest = std::max(widest, config.block.BudgetFor(m.upstream_bandwidth));
    const uint64_t payload = widest > kHeaderSize + kCoinbaseBytes ? widest - kHeaderSize - kCoinbaseBytes : 0;
    const double ceiling = AnalyticCeiling(payload, config.block.avg_tx_bytes, config.block.target_interval_s);
    r.throughput = r.duration_s > 0.0 ? ThroughputC(observed, r.duration_s, metrics.tau_bound_ms, ceiling) : ThroughputReport{};
    r.throughput.analytic_ceiling_tps = ceiling;
    r.throughput.tau_bound_ms = metrics.tau_bound_ms;

    r.coalition = IsDecentralised(config.miners, metrics.epsilon_d);

    if (!result.trace.flows.empty()) r.centrality = EconomicCentrality(result.trace.flows, result.trace.node_count());

    std::vector<double> t95;
    std::optional<double> t90_header;
    std::optional<double> t90_block;
    bool all_reached = true;
    for (const MessageTrace& m : result.trace.messages) {
        if (m.kind == MessageKind::kHeader) {
            const auto a = Ms(TimeToFraction(result.trace, m, 0.95));
            const auto b = Ms(TimeToFraction(result.trace, m, 0.90));
            if (!a || !b) {
                all_reached = false;
                continue;
            }
            t95.push_back(*a);
            t90_header = std::max(t90_header.value_or(0.0), *b);
        } else {
            const auto b = Ms(TimeToFraction(result.trace, m, 0.90));
            if (!b) {
                all_reached = false;
                continue;
            }
            t90_block = std::max(t90_block.value_or(0.0), *b);
        }
    }
    if (!t95.empty()) {
        std::sort(t95.begin(), t95.end());
        r.propagation.header_t95_median_ms = t95[(t95.size() - 1) / 2];
        r.propagation.header_t95_max_ms = all_reached ? std::optional<double>(t95.back()) : std::nullopt;
    }
    r.propagation.header_t90_max_ms = all_reached ? t90_header : std::nullopt;
    r.propagation.block_t90_max_ms = all_reached ? t90_block : std::nullopt;
    const auto margin = static_cast<SimTime>(std::llround(metrics.t_secure_margin_ms * kMicrosPerMilli));
    r.propagation.t_secure_ms = ToMillis(TSecure(result.trace, margin));

    const double intervals = r.duration_s / config.block.target_interval_s;
    for (const MinerAgent& m : config.miners) {
        MinerOutcome o = outcomes[m.id];
        o.costs = static_cast<Amount>(std::llround(static_cast<double>(m.CostPerInterval()) * intervals));
        o.profit = MinerProfit(o.revenue, 0, o.costs);
        r.miners.push_back(o);
    }
    return r;
}

namespace {

nlohmann::json OptionalMs(const std::optional<double>& v)
{
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

} // namespace

nlohmann::json ToJson(const MetricsReport& r)
{
    nlohmann::json producers = nlohmann::json::object();
    for (const auto& [id, c] : r.producer_counts) producers[std::to_string(id)] = c;

    nlohmann::json coalition = nullptr;
    if (r.coalition.violating_coalition) coalition = *r.coalition.violating_coalition;

    nlohmann::json miners = nlohmann::json::array();
    for (const MinerOutcome& m : r.miners) {
        miners.push_back({{"id", m.id},
                          {"alpha", m.alpha},
                          {"blocks_found", m.blocks_found},
                          {"best_chain_blocks", m.best_chain_blocks},
                          {"revenue", m.revenue},
                          {"costs", m.costs},
                          {"profit", m.profit}});
    }

    return {
        {"D_entropy_bits", r.d_entropy_bits},
        {"producer_counts", producers},
        {"participation_ratio", r.participation_ratio},
        {"S_finality_error_rate",
         {{"rate", r.finality.rate},
          {"stderr", r.finality.stderr_},
          {"trials", r.finality.trials},
          {"z", r.finality.z},
          {"attacker_alpha", r.finality.attacker_alpha},
          {"secure", r.secure}}},
        {"C_tps",
         {{"tps", r.throughput.tps},
          {"tau_bound_ms", r.throughput.tau_bound_ms},
          {"confirmed_txs", r.throughput.confirmed_txs},
          {"counted_blocks", r.throughput.counted_blocks},
          {"total_blocks", r.throughput.total_blocks},
          {"analytic_ceiling_tps", r.throughput.analytic_ceiling_tps}}},
        {"decentralised",
         {{"value", r.coalition.decentralised},
          {"epsilon", r.coalition.epsilon},
          {"coalition", coalition},
          {"method", ToString(r.coalition.method)}}},
        {"centrality", r.centrality},
        {"propagation",
         {{"header_t95_median_ms", OptionalMs(r.propagation.header_t95_median_ms)},
          {"header_t95_max_ms", OptionalMs(r.propagation.header_t95_max_ms)},
          {"header_t90_max_ms", OptionalMs(r.propagation.header_t90_max_ms)},
          {"block_t90_max_ms", OptionalMs(r.propagation.block_t90_max_ms)},
          {"t_secure_ms", r.propagation.t_secure_ms}}},
        {"miners", miners},
        {"blocks_total", r.blocks_total},
        {"stale_blocks", r.stale_blocks},
        {"converged", r.converged},
        {"duration_s", r.duration_s},
    };
}

bool ScalableAcross(std::span<const double> throughput)
{
    if (throughput.empty()) return false;
    for (size_t i = 0; i < throughput.size(); ++i) {
        if (!(throughput[i] > 0.0)) return false;
        if (i > 0 && !(throughput[i] > throughput[i - 1])) return false;
    }
    return true;
}

std::vector<PanelRow> TrilemmaPanel(std::span<const ScenarioSeries> scenarios)
{
    std::vector<PanelRow> rows;
    for (const ScenarioSeries& s : scenarios) {
        std::vector<double> c;
        for (const PanelPoint& p : s.points) c.push_back(p.report.throughput.tps);
        const bool scalable = ScalableAcross(c);
        for (const PanelPoint& p : s.points) {
            PanelRow row;
            row.scenario = p.label.empty() ? s.name : s.name + "/" + p.label;
            row.d_bits = p.report.d_entropy_bits;
            row.s_rate = p.report.finality.rate;
            row.s_stderr = p.report.finality.stderr_;
            row.c_tps = p.report.throughput.tps;
            row.tau_ms = p.tau_ms;
            row.decentralised = p.report.coalition.decentralised;
            row.secure = p.report.secure;
            row.scalable = scalable;
            rows.push_back(row);
        }
    }
    return rows;
}

std::string PanelCsv(std::span<const PanelRow> rows)
{
    std::string out = std::string(kPanelHeader) + "\n";
    auto flag = [](bool b) { return b ? "true" : "false"; };
    for (const PanelRow& r : rows) {
        out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.scenario, r.d_bits, r.s_rate, r.s_stderr, r.c_tps,
                           r.tau_ms, flag(r.decentralised), flag(r.secure), flag(r.scalable), flag(r.joint()));
    }
    return out;
}

} // namespace evsim
