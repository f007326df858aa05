// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <evsim/chain/hash.hpp>
#include <evsim/chain/header.hpp>
#include <evsim/chain/merkle.hpp>
#include <evsim/harness/commands.hpp>
#include <evsim/harness/config.hpp>
#include <evsim/metrics/metrics.hpp>
#include <evsim/net/relay.hpp>
#include <evsim/net/topology.hpp>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace evsim;

namespace {

py::object ToPython(const nlohmann::json& j)
{
    return py::module_::import("json").attr("loads")(j.dump());
}

std::vector<Hash256> ParseHashes(const std::vector<std::string>& hex)
{
    std::vector<Hash256> out;
    out.reserve(hex.size());
    for (const std::string& h : hex) out.push_back(Hash256::FromHex(h));
    return out;
}

// Runs a command with captured output; returns (exit code, stdout, stderr).
template <typename F>
py::tuple Captured(F&& f)
{
    std::ostringstream out, err;
    const Console console{out, err, false};
    int code;
    {
        py::gil_scoped_release release;
        code = f(console);
    }
    return py::make_tuple(code, out.str(), err.str());
}

std::vector<MinerAgent> Roster(const std::vector<double>& alphas)
{
    std::vector<MinerAgent> miners;
    for (size_t i = 0; i < alphas.size(); ++i) {
        MinerAgent m;
        m.id = static_cast<NodeId>(i);
        m.alpha = alphas[i];
        m.upstream_bandwidth = 1.0;
        miners.push_back(m);
    }
    return miners;
}

} // namespace

PYBIND11_MODULE(_evsim, m)
{
    m.doc() = "Discrete-event blockchain scalability simulator";
    m.attr("__version__") = EVSIM_VERSION;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<TopologyError>(m, "TopologyError", PyExc_ValueError);

    m.def("sha256d", [](py::bytes data) {
        const std::string s = data;
        const Hash256 h = Sha256d(std::span(reinterpret_cast<const uint8_t*>(s.data()), s.size()));
        return py::bytes(reinterpret_cast<const char*>(h.data()), Hash256::kSize);
    });

    m.def("header_hash", [](const std::string& hex) { return BlockHeader::FromHex(hex).GetHash().ToHex(); },
          py::arg("header_hex"), "Display-order hash of an 80-byte header given in hex.");
    m.def("check_proof_of_work", [](const std::string& hex) { return CheckProofOfWork(BlockHeader::FromHex(hex)); },
          py::arg("header_hex"));

    m.def("merkle_root", [](const std::vector<std::string>& leaves) { return ComputeMerkleRoot(ParseHashes(leaves)).ToHex(); },
          py::arg("leaves"));
    m.def(
        "merkle_proof",
        [](const std::vector<std::string>& leaves, uint64_t index) {
            const MerkleProof p = BuildMerkleProof(ParseHashes(leaves), index);
            std::vector<std::string> siblings;
            for (const Hash256& h : p.siblings) siblings.push_back(h.ToHex());
            return py::make_tuple(p.leaf_index, siblings);
        },
        py::arg("leaves"), py::arg("index"), "Returns (leaf_index, siblings).");
    m.def(
        "verify_merkle_proof",
        [](const std::string& leaf, uint64_t index, const std::vector<std::string>& siblings, const std::string& root) {
            MerkleProof p;
            p.leaf_index = index;
            p.siblings = ParseHashes(siblings);
            return VerifyMerkleProof(Hash256::FromHex(leaf), p, Hash256::FromHex(root));
        },
        py::arg("leaf"), py::arg("index"), py::arg("siblings"), py::arg("root"));

    m.def(
        "topology",
        [](const std::string& kind, const std::vector<double>& params, uint64_t seed, size_t miners, const std::string& latency) {
            TopologyArgs a;
            a.kind = kind;
            a.params = params;
            a.seed = seed;
            a.miners = miners;
            a.latency = latency;
            return ToPython(TopologySummary(GenerateTopology(TopologySpecFromArgs(a))));
        },
        py::arg("kind"), py::arg("params"), py::arg("seed") = 0, py::arg("miners") = 0, py::arg("latency") = "constant:10");

    m.def(
        "sender_cost",
        [](const std::string& kind, uint64_t n, uint64_t d, uint32_t fanout) {
            RelayStrategy s;
            s.kind = ParseRelayKind(kind);
            s.fanout = fanout;
            return SenderCost(s, n, d);
        },
        py::arg("kind"), py::arg("n"), py::arg("d"), py::arg("fanout") = 8);

    m.def(
        "finality_error_rate",
        [](double alpha, int z, uint64_t trials, uint64_t horizon, uint64_t seed) {
            FinalityEstimate e;
            {
                py::gil_scoped_release release;
                e = FinalityErrorRate(alpha, z, trials, horizon, seed);
            }
            py::dict d;
            d["rate"] = e.rate;
            d["stderr"] = e.stderr_;
            d["trials"] = e.trials;
            return d;
        },
        py::arg("attacker_alpha"), py::arg("z"), py::arg("trials") = 50000, py::arg("horizon") = 2000, py::arg("seed") = 0);

    m.def(
        "entropy_bits",
        [](const std::map<NodeId, uint64_t>& counts) { return EntropyBits(counts); }, py::arg("counts"));
    m.def(
        "is_decentralised",
        [](const std::vector<double>& alphas, double epsilon) {
            const CoalitionControlResult r = IsDecentralised(Roster(alphas), epsilon);
            return py::make_tuple(r.decentralised, r.violating_coalition);
        },
        py::arg("alphas"), py::arg("epsilon"), "Returns (decentralised, smallest violating coalition as miner indices).");

    m.def(
        "load_config",
        [](const std::filesystem::path& path) { return ToPython(LoadScenario(path).ToJson()); }, py::arg("path"),
        "Canonical form of a scenario file with every default filled in.");
    m.def(
        "config_digest", [](const std::filesystem::path& path) { return LoadScenario(path).Digest().ToHex(); }, py::arg("path"));

    m.def(
        "run_scenario",
        [](const std::filesystem::path& path) {
            const ScenarioConfig cfg = LoadScenario(path);
            RunOutputs out;
            {
                py::gil_scoped_release release;
                out = RunScenario(cfg);
            }
            return ToPython(MetricsDocument(cfg, out.metrics));
        },
        py::arg("path"), "Runs one scenario in memory and returns its metrics document.");

    m.def(
        "run",
        [](const std::filesystem::path& config, const std::filesystem::path& out_dir) {
            return Captured([&](const Console& c) { return CmdRun(config, out_dir, c); });
        },
        py::arg("config"), py::arg("out_dir"));
    m.def(
        "sweep",
        [](const std::vector<std::filesystem::path>& configs, const std::filesystem::path& out_dir, unsigned jobs) {
            return Captured([&](const Console& c) { return CmdSweep(configs, out_dir, jobs, false, c); });
        },
        py::arg("configs"), py::arg("out_dir"), py::arg("jobs") = 1);
    m.def(
        "verify",
        [](const std::filesystem::path& headers, std::optional<std::filesystem::path> proof) {
            return Captured([&](const Console& c) { return CmdVerify(headers, proof, c); });
        },
        py::arg("headers"), py::arg("proof") = py::none());
}
