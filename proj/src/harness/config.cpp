// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <evsim/harness/config.hpp>

#include <evsim/chain/work.hpp>
#include <evsim/util/rng.hpp>

#include <fmt/format.h>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace evsim {

ConfigError::ConfigError(std::string field, int line, const std::string& what)
    : std::runtime_error(line > 0 ? fmt::format("line {}: {}: {}", line, field, what) : fmt::format("{}: {}", field, what)),
      field_(std::move(field)),
      line_(line)
{
}

namespace {

using nlohmann::json;

std::string Join(const std::string& path, const std::string& key)
{
    return path.empty() ? key : path + "." + key;
}

json FromToml(const toml::node& node, const std::string& path, SourceLines& lines)
{
    lines.emplace(path, static_cast<int>(node.source().begin.line));
    switch (node.type()) {
    case toml::node_type::table: {
        json out = json::object();
        for (auto&& [key, child] : *node.as_table()) {
            const std::string sub = Join(path, std::string(key.str()));
            lines[sub] = static_cast<int>(key.source().begin.line);
            json value = FromToml(child, sub, lines);
            lines[sub] = static_cast<int>(key.source().begin.line);
            out[std::string(key.str())] = std::move(value);
        }
        return out;
    }
    case toml::node_type::array: {
        json out = json::array();
        size_t i = 0;
        for (const toml::node& child : *node.as_array()) out.push_back(FromToml(child, fmt::format("{}[{}]", path, i++), lines));
        return out;
    }
    case toml::node_type::string: return std::string(node.as_string()->get());
    case toml::node_type::integer: return node.as_integer()->get();
    case toml::node_type::floating_point: return node.as_floating_point()->get();
    case toml::node_type::boolean: return node.as_boolean()->get();
    default:
        throw ConfigError(path, static_cast<int>(node.source().begin.line), "dates and times are not supported");
    }
}

int LineOf(const SourceLines& lines, std::string field)
{
    for (;;) {
        auto it = lines.find(field);
        if (it != lines.end()) return it->second;
        const size_t cut = field.find_last_of(".[");
        if (cut == std::string::npos || cut == 0) return 0;
        field.resize(cut);
    }
}

/// Typed access to one table with unknown-key detection.
class Fields
{
public:
    Fields(const json* obj, std::string path, const SourceLines& lines) : path_(std::move(path)), lines_(lines)
    {
        static const json kEmpty = json::object();
        if (obj == nullptr) obj = &kEmpty;
        if (!obj->is_object()) Fail("", "expected a table");
        obj_ = obj;
    }

    const json* Raw(const std::string& key)
    {
        used_.insert(key);
        auto it = obj_->find(key);
        return it == obj_->end() ? nullptr : &*it;
    }

    bool Has(const std::string& key) const { return obj_->contains(key); }

    double Number(const std::string& key, std::optional<double> def = std::nullopt)
    {
        const json* v = Raw(key);
        if (!v) {
            if (!def) Fail(key, "missing required field");
            return *def;
        }
        if (!v->is_number()) Fail(key, "expected a number");
        const double d = v->get<double>();
        if (!std::isfinite(d)) Fail(key, "must be finite");
        return d;
    }

    uint64_t Unsigned(const std::string& key, std::optional<uint64_t> def = std::nullopt)
    {
        const json* v = Raw(key);
        if (!v) {
            if (!def) Fail(key, "missing required field");
            return *def;
        }
        if (v->is_number_unsigned()) return v->get<uint64_t>();
        if (v->is_number_integer()) {
            if (v->get<int64_t>() < 0) Fail(key, "must be non-negative");
            return static_cast<uint64_t>(v->get<int64_t>());
        }
        if (v->is_number_float()) {
            const double d = v->get<double>();
            if (d < 0 || d != std::floor(d) || d >= 18446744073709551616.0) Fail(key, "expected a non-negative integer");
            return static_cast<uint64_t>(d);
        }
        if (v->is_string()) {
            const std::string s = v->get<std::string>();
            try {
                size_t pos = 0;
                const uint64_t out = std::stoull(s, &pos, 0);
                if (pos == s.size()) return out;
            } catch (const std::exception&) {
            }
        }
        Fail(key, "expected a non-negative integer");
    }

    bool Bool(const std::string& key, bool def)
    {
        const json* v = Raw(key);
        if (!v) return def;
        if (!v->is_boolean()) Fail(key, "expected true or false");
        return v->get<bool>();
    }

    std::string String(const std::string& key, std::optional<std::string> def = std::nullopt)
    {
        const json* v = Raw(key);
        if (!v) {
            if (!def) Fail(key, "missing required field");
            return *def;
        }
        if (!v->is_string()) Fail(key, "expected a string");
        return v->get<std::string>();
    }

    void Finish() const
    {
        for (auto it = obj_->begin(); it != obj_->end(); ++it)
            if (!used_.count(it.key())) Fail(it.key(), "unknown field");
    }

    [[noreturn]] void Fail(const std::string& key, const std::string& what) const
    {
        const std::string field = key.empty() ? path_ : Join(path_, key);
        throw ConfigError(field.empty() ? "<root>" : field, LineOf(lines_, field), what);
    }

    const std::string& path() const { return path_; }

private:
    const json* obj_ = nullptr;
    std::string path_;
    const SourceLines& lines_;
    std::set<std::string> used_;
};

LatencyModel ParseLatency(Fields& f)
{
    const std::string model = f.String("model", "constant");
    if (model == "constant") {
        const double ms = f.Number("ms", 10.0);
        return LatencyModel::Constant(ms);
    }
    if (model == "uniform") {
        const double lo = f.Number("lo_ms");
        const double hi = f.Number("hi_ms");
        return LatencyModel::Uniform(lo, hi);
    }
    if (model == "lognormal") {
        const double mu = f.Number("mu");
        const double sigma = f.Number("sigma");
        return LatencyModel::Lognormal(mu, sigma);
    }
    f.Fail("model", "expected constant, uniform or lognormal");
}

json LatencyJson(const LatencyModel& m)
{
    switch (m.kind) {
    case LatencyModel::Kind::kConstant: return {{"model", "constant"}, {"ms", m.a}};
    case LatencyModel::Kind::kUniform: return {{"model", "uniform"}, {"lo_ms", m.a}, {"hi_ms", m.b}};
    case LatencyModel::Kind::kLognormal: return {{"model", "lognormal"}, {"mu", m.a}, {"sigma", m.b}};
    }
    return {};
}

void RequirePositive(Fields& f, const std::string& key, double v)
{
    if (!(v > 0.0)) f.Fail(key, "must be positive");
}

std::vector<std::string> SplitPath(const std::string& path)
{
    std::vector<std::string> parts;
    std::stringstream ss(path);
    std::string part;
    while (std::getline(ss, part, '.')) parts.push_back(part);
    return parts;
}

size_t SetAtPath(json& node, const std::vector<std::string>& parts, size_t i, const json& value)
{
    if (i == parts.size()) {
        node = value;
        return 1;
    }
    const std::string& p = parts[i];
    if (node.is_array()) {
        if (p == "*") {
            size_t n = 0;
            for (json& child : node) n += SetAtPath(child, parts, i + 1, value);
            return n;
        }
        size_t idx = 0;
        try {
            size_t pos = 0;
            idx = std::stoul(p, &pos);
            if (pos != p.size()) return 0;
        } catch (const std::exception&) {
            return 0;
        }
        return idx < node.size() ? SetAtPath(node[idx], parts, i + 1, value) : 0;
    }
    if (node.is_object()) {
        if (i + 1 == parts.size()) {
            node[p] = value;
            return 1;
        }
        auto it = node.find(p);
        return it == node.end() ? 0 : SetAtPath(*it, parts, i + 1, value);
    }
    return 0;
}

} // namespace

ConfigDocument ParseConfigText(const std::string& text, bool as_json, const std::string& origin)
{
    ConfigDocument out;
    out.origin = origin;
    if (as_json) {
        try {
            out.doc = json::parse(text);
        } catch (const json::parse_error& e) {
            // Byte offset to line number.
            const size_t upto = std::min<size_t>(e.byte, text.size());
            const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
            throw ConfigError("<syntax>", line, e.what());
        }
        return out;
    }
    try {
        const toml::table table = toml::parse(text, origin);
        out.doc = FromToml(table, "", out.lines);
    } catch (const toml::parse_error& e) {
        throw ConfigError("<syntax>", static_cast<int>(e.source().begin.line), std::string(e.description()));
    }
    return out;
}

ConfigDocument LoadConfigDocument(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("<file>", 0, "cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ParseConfigText(ss.str(), path.extension() == ".json", path.string());
}

ScenarioConfig ParseScenario(const ConfigDocument& document)
{
    const SourceLines& lines = document.lines;
    Fields root(&document.doc, "", lines);
    ScenarioConfig c;
    c.name = root.String("name");
    if (c.name.empty()) root.Fail("name", "must not be empty");
    c.seed = root.Unsigned("seed");
    c.duration_s = root.Number("duration_s");
    if (!(c.duration_s > 0.0)) root.Fail("duration_s", "must be positive");

    {
        Fields t(root.Raw("topology"), "topology", lines);
        if (!root.Has("topology")) root.Fail("topology", "missing required table");
        try {
            c.topology.kind = ParseTopologyKind(t.String("kind"));
        } catch (const TopologyError& e) {
            t.Fail("kind", e.what());
        }
        c.topology.n = t.Unsigned("n", 0);
        c.topology.k = t.Unsigned("k", 4);
        c.topology.beta = t.Number("beta", 0.1);
        c.topology.p = t.Number("p", 0.1);
        c.topology.observers = t.Unsigned("observers", 0);
        c.topology.attach = t.Unsigned("attach", 1);
        c.topology.seed = t.Unsigned("seed", c.seed);
        Fields lat(t.Raw("latency"), "topology.latency", lines);
        c.topology.latency = ParseLatency(lat);
        lat.Finish();
        try {
            c.topology.latency.Validate();
        } catch (const std::exception& e) {
            lat.Fail("", e.what());
        }
        t.Finish();
    }

    {
        const json* roster = root.Raw("miners");
        if (!roster || !roster->is_array() || roster->empty()) root.Fail("miners", "expected a non-empty array of miner tables");
        for (size_t i = 0; i < roster->size(); ++i) {
            Fields m(&(*roster)[i], fmt::format("miners[{}]", i), lines);
            MinerAgent a;
            a.id = static_cast<NodeId>(i);
            a.alpha = m.Number("alpha");
            a.upstream_bandwidth = m.Number("bandwidth_bps") / 8.0;
            a.min_feerate = m.Number("min_feerate", 0.0);
            a.electricity_cost = static_cast<Amount>(m.Unsigned("electricity_cost", 0));
            a.hardware_cost = static_cast<Amount>(m.Unsigned("hardware_cost", 0));
            std::optional<NodeId> node;
            if (m.Has("node")) node = static_cast<NodeId>(m.Unsigned("node"));
            m.Finish();
            c.miners.push_back(a);
            c.miner_nodes.push_back(node);
        }
        try {
            ValidateRoster(c.miners);
        } catch (const RosterError& e) {
            std::string what = e.what();
            if (what.rfind(e.field() + ": ", 0) == 0) what.erase(0, e.field().size() + 2);
            throw ConfigError(e.field(), LineOf(lines, e.field()), what);
        }
        const bool any = std::any_of(c.miner_nodes.begin(), c.miner_nodes.end(), [](const auto& n) { return n.has_value(); });
        const bool all = std::all_of(c.miner_nodes.begin(), c.miner_nodes.end(), [](const auto& n) { return n.has_value(); });
        if (any && !all) root.Fail("miners", "either every miner or none gives a node");
        if (all && c.topology.kind == TopologyKind::kMinerBackbone)
            root.Fail("miners", "a miner backbone numbers its miners itself; drop the node fields");
        c.topology.miners = all ? 0 : c.miners.size();
        try {
            c.topology.Validate();
        } catch (const TopologyError& e) {
            throw ConfigError("topology", LineOf(lines, "topology"), e.what());
        }
    }

    {
        Fields r(root.Raw("relay"), "relay", lines);
        try {
            c.relay.kind = ParseRelayKind(r.String("kind", "unicast-flood"));
        } catch (const std::invalid_argument& e) {
            r.Fail("kind", e.what());
        }
        c.relay.fanout = static_cast<uint32_t>(r.Unsigned("fanout", 8));
        c.relay.overhead_ms = r.Number("overhead_ms", 0.0);
        c.relay.overhead_bytes = r.Unsigned("overhead_bytes", 80);
        r.Finish();
        try {
            c.relay.Validate();
        } catch (const std::invalid_argument& e) {
            r.Fail("", e.what());
        }
    }

    {
        Fields p(root.Raw("pow"), "pow", lines);
        const std::string mode = p.String("mode", "abstract");
        if (mode != "abstract" && mode != "concrete") p.Fail("mode", "expected abstract or concrete");
        c.pow.concrete = mode == "concrete";
        c.pow.bits = static_cast<uint32_t>(p.Unsigned("bits", kEasyBits));
        p.Finish();
        try {
            WorkFromBits(c.pow.bits);
        } catch (const std::exception& e) {
            p.Fail("bits", e.what());
        }
    }

    {
        Fields b(root.Raw("block"), "block", lines);
        c.block.max_bytes = b.Unsigned("max_bytes", c.block.max_bytes);
        c.block.avg_tx_bytes = static_cast<uint32_t>(b.Unsigned("avg_tx_bytes", c.block.avg_tx_bytes));
        c.block.target_interval_s = b.Number("target_interval_s", c.block.target_interval_s);
        c.block.propagation_budget_ms = b.Number("propagation_budget_ms", 0.0);
        c.block.tx_rate = b.Number("tx_rate", 0.0);
        c.block.subsidy = static_cast<Amount>(b.Unsigned("subsidy", static_cast<uint64_t>(kDefaultSubsidy)));
        c.block.mempool_max_txs = b.Unsigned("mempool_max_txs", 0);
        RequirePositive(b, "max_bytes", static_cast<double>(c.block.max_bytes));
        RequirePositive(b, "avg_tx_bytes", c.block.avg_tx_bytes);
        RequirePositive(b, "target_interval_s", c.block.target_interval_s);
        if (c.block.propagation_budget_ms < 0) b.Fail("propagation_budget_ms", "must be non-negative");
        if (c.block.tx_rate < 0) b.Fail("tx_rate", "must be non-negative (0 selects the default)");
        b.Finish();
    }

    {
        Fields n(root.Raw("network"), "network", lines);
        c.observer_bandwidth_bps = n.Number("observer_bandwidth_bps", c.observer_bandwidth_bps);
        RequirePositive(n, "observer_bandwidth_bps", c.observer_bandwidth_bps);
        c.max_extension_blocks = n.Unsigned("max_extension_blocks", c.max_extension_blocks);
        n.Finish();
    }

    {
        Fields m(root.Raw("metrics"), "metrics", lines);
        MetricsConfig& mc = c.metrics;
        mc.epsilon_d = m.Number("epsilon_D_coalition", mc.epsilon_d);
        mc.epsilon_s = m.Number("epsilon_S", mc.epsilon_s);
        mc.z = static_cast<int>(m.Unsigned("z", static_cast<uint64_t>(mc.z)));
        mc.tau_bound_ms = m.Number("tau_bound_ms", mc.tau_bound_ms);
        mc.attacker_alpha = m.Number("attacker_alpha", mc.attacker_alpha);
        mc.trials = m.Unsigned("trials", mc.trials);
        mc.horizon = m.Unsigned("horizon", mc.horizon);
        mc.t_secure_margin_ms = m.Number("t_secure_margin_ms", mc.t_secure_margin_ms);
        m.Finish();
        if (!(mc.epsilon_d > 0.0 && mc.epsilon_d <= 1.0)) m.Fail("epsilon_D_coalition", "must lie in (0, 1]");
        if (!(mc.epsilon_s > 0.0 && mc.epsilon_s <= 1.0)) m.Fail("epsilon_S", "must lie in (0, 1]");
        if (mc.z < 1) m.Fail("z", "must be at least 1");
        RequirePositive(m, "tau_bound_ms", mc.tau_bound_ms);
        if (!(mc.attacker_alpha >= 0.0 && mc.attacker_alpha <= 1.0)) m.Fail("attacker_alpha", "must lie in [0, 1]");
        if (mc.trials < kMinFinalityTrials) m.Fail("trials", fmt::format("must be at least {}", kMinFinalityTrials));
        if (mc.horizon < 1) m.Fail("horizon", "must be positive");
        if (mc.t_secure_margin_ms < 0) m.Fail("t_secure_margin_ms", "must be non-negative");
    }

    if (root.Has("sweep")) {
        Fields s(root.Raw("sweep"), "sweep", lines);
        SweepSpec spec;
        spec.parameter = s.String("parameter");
        const json* values = s.Raw("values");
        if (!values || !values->is_array() || values->empty()) s.Fail("values", "expected a non-empty array");
        spec.values.assign(values->begin(), values->end());
        s.Finish();
        json probe = document.doc;
        probe.erase("sweep");
        if (SetAtPath(probe, SplitPath(spec.parameter), 0, spec.values.front()) == 0)
            s.Fail("parameter", "'" + spec.parameter + "' does not name a field of this config");
        try {
            ParseScenario({probe, {}, document.origin});
        } catch (const ConfigError& e) {
            s.Fail("parameter", "first value does not apply: " + std::string(e.what()));
        }
        c.sweep = std::move(spec);
    } else {
        root.Raw("sweep");
    }

    if (root.Has("sweep_point")) {
        Fields p(root.Raw("sweep_point"), "sweep_point", lines);
        SweepPoint sp;
        sp.index = p.Unsigned("index");
        sp.parameter = p.String("parameter");
        const json* v = p.Raw("value");
        if (!v) p.Fail("value", "missing required field");
        sp.value = *v;
        p.Finish();
        c.sweep_point = std::move(sp);
    }

    root.Finish();
    return c;
}

ScenarioConfig LoadScenario(const std::filesystem::path& path)
{
    return ParseScenario(LoadConfigDocument(path));
}

nlohmann::json ScenarioConfig::ToJson() const
{
    json miners_json = json::array();
    for (size_t i = 0; i < miners.size(); ++i) {
        const MinerAgent& m = miners[i];
        json entry = {{"alpha", m.alpha},
                      {"bandwidth_bps", m.upstream_bandwidth * 8.0},
                      {"min_feerate", m.min_feerate},
                      {"electricity_cost", m.electricity_cost},
                      {"hardware_cost", m.hardware_cost}};
        if (miner_nodes[i]) entry["node"] = *miner_nodes[i];
        miners_json.push_back(entry);
    }
    json topo = {{"kind", evsim::ToString(topology.kind)}, {"seed", topology.seed}, {"latency", LatencyJson(topology.latency)}};
    switch (topology.kind) {
    case TopologyKind::kWattsStrogatz: topo.update({{"n", topology.n}, {"k", topology.k}, {"beta", topology.beta}}); break;
    case TopologyKind::kErdosRenyi: topo.update({{"n", topology.n}, {"p", topology.p}}); break;
    case TopologyKind::kMinerBackbone: topo.update({{"observers", topology.observers}, {"attach", topology.attach}}); break;
    default: topo["n"] = topology.n; break;
    }
    json out = {
        {"name", name},
        {"seed", seed},
        {"duration_s", duration_s},
        {"topology", topo},
        {"miners", miners_json},
        {"relay",
         {{"kind", evsim::ToString(relay.kind)},
          {"fanout", relay.fanout},
          {"overhead_ms", relay.overhead_ms},
          {"overhead_bytes", relay.overhead_bytes}}},
        {"pow", {{"mode", pow.concrete ? "concrete" : "abstract"}, {"bits", pow.bits}}},
        {"block",
         {{"max_bytes", block.max_bytes},
          {"avg_tx_bytes", block.avg_tx_bytes},
          {"target_interval_s", block.target_interval_s},
          {"propagation_budget_ms", block.propagation_budget_ms},
          {"tx_rate", block.tx_rate},
          {"subsidy", block.subsidy},
          {"mempool_max_txs", block.mempool_max_txs}}},
        {"network", {{"observer_bandwidth_bps", observer_bandwidth_bps}, {"max_extension_blocks", max_extension_blocks}}},
        {"metrics",
         {{"epsilon_D_coalition", metrics.epsilon_d},
          {"epsilon_S", metrics.epsilon_s},
          {"z", metrics.z},
          {"tau_bound_ms", metrics.tau_bound_ms},
          {"attacker_alpha", metrics.attacker_alpha},
          {"trials", metrics.trials},
          {"horizon", metrics.horizon},
          {"t_secure_margin_ms", metrics.t_secure_margin_ms}}},
    };
    if (sweep) out["sweep"] = {{"parameter", sweep->parameter}, {"values", sweep->values}};
    if (sweep_point)
        out["sweep_point"] = {{"index", sweep_point->index}, {"parameter", sweep_point->parameter}, {"value", sweep_point->value}};
    return out;
}

Hash256 ScenarioConfig::Digest() const
{
    const std::string canonical = ToJson().dump();
    return Sha256d(std::span(reinterpret_cast<const uint8_t*>(canonical.data()), canonical.size()));
}

std::string ScenarioConfig::Label() const
{
    if (!sweep_point) return {};
    const std::string& p = sweep_point->parameter;
    const size_t dot = p.find_last_of('.');
    const std::string leaf = dot == std::string::npos ? p : p.substr(dot + 1);
    const json& v = sweep_point->value;
    if (v.is_string()) return leaf + "=" + v.get<std::string>();
    if (v.is_number_float() && std::abs(v.get<double>()) < 1e15 && v.get<double>() == std::floor(v.get<double>()))
        return leaf + "=" + std::to_string(static_cast<int64_t>(v.get<double>()));
    return leaf + "=" + v.dump();
}

uint64_t ChildSeed(uint64_t seed, uint64_t index)
{
    std::array<uint8_t, 16> buf{};
    for (int i = 0; i < 8; ++i) {
        buf[i] = static_cast<uint8_t>(seed >> (8 * i));
        buf[8 + i] = static_cast<uint8_t>(index >> (8 * i));
    }
    const Hash256 h = Sha256d(buf);
    uint64_t out = 0;
    for (int i = 0; i < 8; ++i) out |= static_cast<uint64_t>(h[i]) << (8 * i);
    return out;
}

std::vector<ScenarioConfig> ExpandSweep(const ConfigDocument& doc)
{
    ScenarioConfig parent = ParseScenario(doc);
    if (!parent.sweep) return {parent};
    std::vector<ScenarioConfig> out;
    for (size_t i = 0; i < parent.sweep->values.size(); ++i) {
        ConfigDocument child = doc;
        child.doc.erase("sweep");
        const json& value = parent.sweep->values[i];
        SetAtPath(child.doc, SplitPath(parent.sweep->parameter), 0, value);
        ScenarioConfig c;
        try {
            c = ParseScenario(child);
        } catch (const ConfigError& e) {
            throw ConfigError("sweep.values[" + std::to_string(i) + "]", LineOf(doc.lines, "sweep.values"), e.what());
        }
        c.seed = ChildSeed(parent.seed, i);
        c.sweep_point = SweepPoint{i, parent.sweep->parameter, value};
        out.push_back(std::move(c));
    }
    return out;
}

SimConfig BuildSimConfig(const ScenarioConfig& c)
{
    SimConfig s;
    s.graph = GenerateTopology(c.topology);
    s.miners = c.miners;
    const std::vector<NodeId> placed = s.graph.Miners();
    for (size_t i = 0; i < s.miners.size(); ++i) {
        if (c.miner_nodes[i]) {
            if (*c.miner_nodes[i] >= s.graph.node_count())
                throw ConfigError(fmt::format("miners[{}].node", i), 0, "not a node of the generated topology");
            s.miners[i].id = *c.miner_nodes[i];
        } else {
            s.miners[i].id = placed.at(i);
        }
    }
    s.relay = c.relay;
    s.pow = c.pow;
    s.block = c.block;
    s.duration = static_cast<SimTime>(std::llround(c.duration_s * kMicrosPerSecond));
    s.seed = c.seed;
    s.observer_bandwidth = c.observer_bandwidth_bps / 8.0;
    s.max_extension_blocks = c.max_extension_blocks;
    return s;
}

} // namespace evsim
