// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <evsim/harness/commands.hpp>

#include <evsim/chain/header.hpp>
#include <evsim/chain/work.hpp>
#include <evsim/spv/spv_client.hpp>
#include <evsim/util/hex.hpp>

#include <fmt/format.h>

#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace evsim {

namespace fs = std::filesystem;
using nlohmann::json;

std::string Console::Good(const std::string& s) const
{
    return color ? "\x1b[32m" + s + "\x1b[0m" : s;
}

std::string Console::Bad(const std::string& s) const
{
    return color ? "\x1b[31m" + s + "\x1b[0m" : s;
}

bool ColorWanted(int fd)
{
    const char* no_color = std::getenv("NO_COLOR");
    if (no_color != nullptr && no_color[0] != '\0') return false;
    return isatty(fd) != 0;
}

namespace {

std::string ReadFile(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void WriteFile(const fs::path& p, const std::string& data)
{
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw std::runtime_error("failed writing " + p.string());
}

std::string Sha256Hex(const std::string& data)
{
    const Hash256 h = Sha256(std::span(reinterpret_cast<const uint8_t*>(data.data()), data.size()));
    return ToHex(h.bytes());
}

std::string Flag(bool b)
{
    return b ? "true" : "false";
}

std::string SafeName(const std::string& s)
{
    std::string out;
    for (char c : s) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
                        c == '-' || c == '_' || c == '=';
        out += ok ? c : '_';
    }
    return out;
}

} // namespace

RunOutputs RunScenario(const ScenarioConfig& config)
{
    RunOutputs out;
    out.sim = BuildSimConfig(config);
    out.result = RunSimulation(out.sim);
    out.metrics = ComputeMetrics(out.result, out.sim, config.metrics);
    return out;
}

std::string TraceCsv(const SimResult& result)
{
    std::string out = "message_id,node_id,role,first_receipt_us\n";
    auto it = std::back_inserter(out);
    for (const MessageTrace& m : result.trace.messages) {
        const std::string id = m.Id();
        for (NodeId v = 0; v < m.first_receipt.size(); ++v) {
            if (m.first_receipt[v] == kNever) continue;
            fmt::format_to(it, "{},{},{},{}\n", id, v, ToString(result.trace.roles[v]), m.first_receipt[v]);
        }
    }
    return out;
}

std::string BlocksCsv(const SimResult& result)
{
    std::unordered_map<Hash256, std::pair<const MessageTrace*, const MessageTrace*>> by_hash;
    for (const MessageTrace& m : result.trace.messages)
        (m.kind == MessageKind::kHeader ? by_hash[m.hash].first : by_hash[m.hash].second) = &m;

    std::string out = "index,hash,parent,height,producer,found_time_us,tx_count,size_bytes,fees,reward,in_horizon,"
                      "on_best_chain,propagation_us\n";
    auto it = std::back_inserter(out);
    for (size_t i = 0; i < result.blocks.size(); ++i) {
        const BlockRecord& b = result.blocks[i];
        const auto& [header, block] = by_hash.at(b.hash);
        const auto t = BlockPropagationTime(result.trace, *header, *block);
        fmt::format_to(it, "{},{},{},{},{},{},{},{},{},{},{},{},{}\n", i, b.hash.ToHex(), b.parent.ToHex(), b.height,
                       b.producer, b.found_time, b.tx_count, b.size_bytes, b.fees, b.reward, Flag(b.in_horizon),
                       Flag(b.on_best_chain), t ? std::to_string(*t) : std::string());
    }
    return out;
}

json MetricsDocument(const ScenarioConfig& config, const MetricsReport& metrics)
{
    return {{"tool", "evsim"},
            {"version", EVSIM_VERSION},
            {"scenario", config.name},
            {"label", config.Label()},
            {"config", config.ToJson()},
            {"metrics", ToJson(metrics)}};
}

json WriteRunDirectory(const fs::path& dir, const ScenarioConfig& config, const RunOutputs& outputs)
{
    fs::create_directories(dir);
    const std::string files[] = {TraceCsv(outputs.result), BlocksCsv(outputs.result),
                                 MetricsDocument(config, outputs.metrics).dump(2) + "\n"};
    json inventory = json::array();
    for (size_t i = 0; i < std::size(kRunFiles); ++i) {
        WriteFile(dir / kRunFiles[i], files[i]);
        inventory.push_back({{"name", kRunFiles[i]}, {"bytes", files[i].size()}, {"sha256", Sha256Hex(files[i])}});
    }
    const json manifest = {{"config_digest", config.Digest().ToHex()},
                           {"tool_version", EVSIM_VERSION},
                           {"config", config.ToJson()},
                           {"files", inventory}};
    // The manifest goes last so a crash mid-run never leaves a run that looks complete.
    WriteFile(dir / "manifest.json", manifest.dump(2) + "\n");
    return manifest;
}

bool RunIsComplete(const fs::path& dir, const ScenarioConfig& config)
{
    try {
        const json manifest = json::parse(ReadFile(dir / "manifest.json"));
        if (manifest.at("config_digest").get<std::string>() != config.Digest().ToHex()) return false;
        if (manifest.at("tool_version").get<std::string>() != EVSIM_VERSION) return false;
        for (const json& f : manifest.at("files")) {
            const fs::path p = dir / f.at("name").get<std::string>();
            if (!fs::exists(p)) return false;
            if (Sha256Hex(ReadFile(p)) != f.at("sha256").get<std::string>()) return false;
        }
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

PanelPoint PanelPointFromMetrics(const json& doc)
{
    const json& m = doc.at("metrics");
    PanelPoint p;
    p.label = doc.at("label").get<std::string>();
    p.tau_ms = doc.at("config").at("metrics").at("tau_bound_ms").get<double>();
    p.report.d_entropy_bits = m.at("D_entropy_bits").get<double>();
    p.report.finality.rate = m.at("S_finality_error_rate").at("rate").get<double>();
    p.report.finality.stderr_ = m.at("S_finality_error_rate").at("stderr").get<double>();
    p.report.secure = m.at("S_finality_error_rate").at("secure").get<bool>();
    p.report.throughput.tps = m.at("C_tps").at("tps").get<double>();
    p.report.coalition.decentralised = m.at("decentralised").at("value").get<bool>();
    return p;
}

std::string GnuplotScript(const std::string& panel_csv_path)
{
    return fmt::format("set datafile separator ','\n"
                       "set key autotitle columnhead\n"
                       "set style data histograms\n"
                       "set style fill solid 0.6\n"
                       "set xtics rotate by -30\n"
                       "set ylabel 'confirmed tx/s under tau'\n"
                       "set logscale y\n"
                       "plot '{}' using 5:xtic(1) title 'C_tps'\n",
                       panel_csv_path);
}

namespace {

void PrintConfigError(const Console& console, const std::string& origin, const ConfigError& e)
{
    console.err << fmt::format("{}: {}: {}\n", console.Bad("config error"), origin, e.what());
}

} // namespace

int CmdRun(const fs::path& config_path, const fs::path& out_dir, const Console& console)
{
    ScenarioConfig config;
    try {
        const ConfigDocument doc = LoadConfigDocument(config_path);
        config = ParseScenario(doc);
        if (config.sweep) console.err << "note: ignoring the sweep block; use 'sweep' to run every point\n";
        config.sweep.reset();
        RunOutputs outputs = RunScenario(config);
        WriteRunDirectory(out_dir, config, outputs);
        const MetricsReport& m = outputs.metrics;
        console.out << fmt::format("{}: {} blocks, D={:.4f} bits, S={:.6f}, C={:.3f} tps, decentralised={}, secure={}\n",
                                   config.name, outputs.result.blocks.size(), m.d_entropy_bits, m.finality.rate,
                                   m.throughput.tps, Flag(m.coalition.decentralised), Flag(m.secure));
        console.out << "wrote " << out_dir.string() << "\n";
        return kExitOk;
    } catch (const ConfigError& e) {
        PrintConfigError(console, config_path.string(), e);
        return kExitConfig;
    } catch (const TopologyError& e) {
        console.err << console.Bad("config error") << ": " << config_path.string() << ": topology: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        console.err << console.Bad("error") << ": " << e.what() << "\n";
        return kExitFailure;
    }
}

int CmdSweep(const std::vector<fs::path>& configs, const fs::path& out_dir, unsigned jobs, bool gnuplot,
             const Console& console, SweepReport* report)
{
    struct Job {
        ScenarioConfig config;
        fs::path dir;
        size_t series;
        bool executed = false;
        std::string error;
    };
    std::vector<Job> work;
    std::vector<ScenarioSeries> series;
    std::set<std::string> names;
    for (const fs::path& path : configs) {
        try {
            const ConfigDocument doc = LoadConfigDocument(path);
            const std::vector<ScenarioConfig> children = ExpandSweep(doc);
            const std::string name = children.front().name;
            if (!names.insert(name).second) throw ConfigError("name", 0, "scenario name '" + name + "' used twice");
            series.push_back({name, {}});
            for (size_t i = 0; i < children.size(); ++i) {
                fs::path dir = out_dir / SafeName(name);
                if (children[i].sweep_point) dir /= fmt::format("{:02}-{}", i, SafeName(children[i].Label()));
                work.push_back({children[i], dir, series.size() - 1, false, {}});
            }
        } catch (const ConfigError& e) {
            PrintConfigError(console, path.string(), e);
            return kExitConfig;
        }
    }

    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next++; i < work.size(); i = next++) {
            Job& job = work[i];
            try {
                if (RunIsComplete(job.dir, job.config)) continue;
                const RunOutputs outputs = RunScenario(job.config);
                WriteRunDirectory(job.dir, job.config, outputs);
                job.executed = true;
            } catch (const std::exception& e) {
                job.error = e.what();
            }
        }
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(work.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();

    int status = kExitOk;
    for (const Job& job : work) {
        if (!job.error.empty()) {
            console.err << console.Bad("error") << ": " << job.dir.string() << ": " << job.error << "\n";
            status = kExitFailure;
            continue;
        }
        console.out << fmt::format("{} {}\n", job.executed ? "ran    " : "skipped", job.dir.string());
    }
    if (status != kExitOk) return status;

    try {
        for (const Job& job : work) {
            const json doc = json::parse(ReadFile(job.dir / "metrics.json"));
            series[job.series].points.push_back(PanelPointFromMetrics(doc));
        }
        const std::vector<PanelRow> rows = TrilemmaPanel(series);
        const fs::path panel = out_dir / "panel.csv";
        WriteFile(panel, PanelCsv(rows));
        for (const PanelRow& r : rows) {
            console.out << fmt::format("{:<40} D={:.3f} S={:.5f} C={:.2f} decentralised={} secure={} scalable={} joint={}\n",
                                       r.scenario, r.d_bits, r.s_rate, r.c_tps, Flag(r.decentralised), Flag(r.secure),
                                       Flag(r.scalable), r.joint() ? console.Good("true") : console.Bad("false"));
        }
        if (gnuplot) console.out << GnuplotScript(panel.string());
        if (report) {
            report->panel = panel;
            for (const Job& job : work) {
                report->run_dirs.push_back(job.dir);
                report->executed.push_back(job.executed);
            }
        }
    } catch (const std::exception& e) {
        console.err << console.Bad("error") << ": " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitOk;
}

LatencyModel ParseLatencyArg(const std::string& s)
{
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    auto num = [&](size_t i) {
        try {
            size_t pos = 0;
            const double v = std::stod(parts.at(i), &pos);
            if (pos != parts[i].size()) throw std::invalid_argument("trailing text");
            return v;
        } catch (const std::exception&) {
            throw TopologyError("bad latency spec '" + s + "'");
        }
    };
    LatencyModel m;
    if (!parts.empty() && parts[0] == "constant" && parts.size() == 2)
        m = LatencyModel::Constant(num(1));
    else if (!parts.empty() && parts[0] == "uniform" && parts.size() == 3)
        m = LatencyModel::Uniform(num(1), num(2));
    else if (!parts.empty() && parts[0] == "lognormal" && parts.size() == 3)
        m = LatencyModel::Lognormal(num(1), num(2));
    else
        throw TopologyError("bad latency spec '" + s + "'; expected constant:MS, uniform:LO:HI or lognormal:MU:SIGMA");
    try {
        m.Validate();
    } catch (const std::invalid_argument& e) {
        throw TopologyError(e.what());
    }
    return m;
}

TopologySpec TopologySpecFromArgs(const TopologyArgs& args)
{
    TopologySpec spec;
    spec.kind = ParseTopologyKind(args.kind);
    spec.seed = args.seed;
    spec.latency = ParseLatencyArg(args.latency);
    const std::vector<double>& p = args.params;
    auto count = [&](size_t lo, size_t hi, const char* usage) {
        if (p.size() < lo || p.size() > hi) throw TopologyError(fmt::format("{} expects parameters: {}", args.kind, usage));
    };
    auto whole = [&](size_t i) {
        if (p[i] < 0 || p[i] != std::floor(p[i])) throw TopologyError(fmt::format("parameter {} must be a whole number", i + 1));
        return static_cast<size_t>(p[i]);
    };
    switch (spec.kind) {
    case TopologyKind::kWattsStrogatz:
        count(3, 3, "n k beta");
        spec.n = whole(0);
        spec.k = whole(1);
        spec.beta = p[2];
        break;
    case TopologyKind::kErdosRenyi:
        count(2, 2, "n p");
        spec.n = whole(0);
        spec.p = p[1];
        break;
    case TopologyKind::kMinerBackbone:
        count(2, 3, "miners observers [attach]");
        spec.miners = whole(0);
        spec.observers = whole(1);
        if (p.size() == 3) spec.attach = whole(2);
        break;
    default:
        count(1, 1, "n");
        spec.n = whole(0);
        break;
    }
    if (spec.kind != TopologyKind::kMinerBackbone) spec.miners = args.miners;
    spec.Validate();
    return spec;
}

json TopologySummary(const NetworkGraph& g)
{
    json out = {{"n", g.node_count()},
                {"edges", g.edge_count()},
                {"avg_path_length", AvgPathLength(g)},
                {"clustering", ClusteringCoefficient(g)},
                {"miners", g.Miners().size()}};
    out["miner_hop_diameter"] = g.Miners().empty() ? json(nullptr) : json(MinerHopDiameter(g));
    return out;
}

int CmdTopology(const TopologyArgs& args, const Console& console)
{
    NetworkGraph g;
    try {
        g = GenerateTopology(TopologySpecFromArgs(args));
    } catch (const std::invalid_argument& e) {
        console.err << console.Bad("config error") << ": " << e.what() << "\n";
        return kExitConfig;
    }
    try {
        console.out << TopologySummary(g).dump(2) << "\n";
        if (args.export_path) {
            std::string text;
            for (const Edge& e : g.Edges()) text += fmt::format("{} {} {}\n", e.a, e.b, e.latency);
            WriteFile(*args.export_path, text);
        }
    } catch (const std::exception& e) {
        console.err << console.Bad("error") << ": " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitOk;
}

int CmdVerify(const fs::path& headers_path, const std::optional<fs::path>& proof_path, const Console& console)
{
    std::vector<BlockHeader> headers;
    try {
        std::stringstream in(ReadFile(headers_path));
        std::string line;
        std::optional<Hash256> prev;
        size_t index = 0;
        while (std::getline(in, line)) {
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
            const size_t start = line.find_first_not_of(" \t");
            if (start == std::string::npos || line[start] == '#') continue;
            line = line.substr(start);

            std::string reason;
            BlockHeader h;
            try {
                h = BlockHeader::FromHex(line);
                if (prev && h.prev_hash != *prev)
                    reason = "previous-hash mismatch";
                else if (!CheckProofOfWork(h))
                    reason = "hash above target";
            } catch (const TargetError& e) {
                reason = std::string("bad target: ") + e.what();
            } catch (const std::invalid_argument& e) {
                reason = std::string("malformed header: ") + e.what();
            }
            if (!reason.empty()) {
                console.out << fmt::format("header {} {} {}\n", index, console.Bad("FAIL"), reason);
                console.err << fmt::format("invalid header at index {}: {}\n", index, reason);
                return kExitFailure;
            }
            const Hash256 hash = h.GetHash();
            console.out << fmt::format("header {} {} {}\n", index, hash.ToHex(), console.Good("ok"));
            headers.push_back(h);
            prev = hash;
            ++index;
        }
        if (headers.empty()) {
            console.err << "no headers in " << headers_path.string() << "\n";
            return kExitFailure;
        }
        console.out << fmt::format("chain of {} headers valid, tip {}\n", headers.size(), prev->ToHex());
    } catch (const std::exception& e) {
        console.err << console.Bad("error") << ": " << e.what() << "\n";
        return kExitFailure;
    }

    if (!proof_path) return kExitOk;
    try {
        const json proof = json::parse(ReadFile(*proof_path));
        SpvClient client(headers.front());
        for (size_t i = 1; i < headers.size(); ++i) client.Ingest(headers[i], 0, static_cast<SimTime>(i));
        MerkleProof mp;
        mp.leaf_index = proof.at("leaf_index").get<uint64_t>();
        for (const json& s : proof.at("siblings")) mp.siblings.push_back(Hash256::FromHex(s.get<std::string>()));
        const SpvResult r = client.VerifySpv(Hash256::FromHex(proof.at("tx_id").get<std::string>()), mp,
                                             Hash256::FromHex(proof.at("block_hash").get<std::string>()));
        const bool ok = r.status == SpvStatus::kConfirmed;
        console.out << fmt::format("proof {}", ok ? console.Good(ToString(r.status)) : console.Bad(ToString(r.status)));
        if (ok) console.out << fmt::format(" depth {} (blocks on top)", r.depth);
        console.out << "\n";
        return ok ? kExitOk : kExitFailure;
    } catch (const std::exception& e) {
        console.err << console.Bad("error") << ": proof: " << e.what() << "\n";
        return kExitFailure;
    }
}

} // namespace evsim
