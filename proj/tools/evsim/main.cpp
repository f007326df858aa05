// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <evsim/harness/commands.hpp>

#include <CLI11.hpp>

#include <unistd.h>

#include <iostream>
#include <thread>

int main(int argc, char** argv)
{
    CLI::App app{"evsim: blockchain scalability simulator"};
    app.set_version_flag("--version", EVSIM_VERSION);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";

    auto* run = app.add_subcommand("run", "run one scenario");
    run->add_option("config", config_path, "scenario file (TOML, or JSON with a .json suffix)")->required();
    run->add_option("-o,--out", out_dir, "run directory")->required();

    std::vector<std::string> sweep_configs;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    bool gnuplot = false;
    auto* sweep = app.add_subcommand("sweep", "run every sweep point of one or more scenarios and write panel.csv");
    sweep->add_option("configs", sweep_configs, "scenario files")->required();
    sweep->add_option("-o,--out", out_dir, "output root")->capture_default_str();
    sweep->add_option("-j,--jobs", jobs, "parallel runs")->check(CLI::PositiveNumber)->capture_default_str();
    sweep->add_flag("--gnuplot", gnuplot, "print a gnuplot script for the panel");

    evsim::TopologyArgs topo;
    std::string export_path;
    auto* topology = app.add_subcommand("topology", "generate a graph and print its statistics");
    topology->add_option("kind", topo.kind, "ws, er, star, path, full-mesh or backbone")->required();
    topology->add_option("params", topo.params, "ws: n k beta; er: n p; star/path/full-mesh: n; backbone: m o [attach]");
    topology->add_option("--seed", topo.seed)->capture_default_str();
    topology->add_option("--miners", topo.miners, "number of nodes marked as miners")->capture_default_str();
    topology->add_option("--latency", topo.latency, "constant:MS, uniform:LO:HI or lognormal:MU:SIGMA")->capture_default_str();
    topology->add_option("--export", export_path, "write an edge list 'a b latency_us'");

    std::string headers_path;
    std::string proof_path;
    auto* verify = app.add_subcommand("verify", "check a header chain and optionally a Merkle proof");
    verify->add_option("headers", headers_path, "file with one 80-byte header in hex per line")->required()->check(CLI::ExistingFile);
    verify->add_option("--proof", proof_path, "JSON {tx_id, block_hash, leaf_index, siblings}")->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? evsim::kExitOk : evsim::kExitConfig;
    }

    const evsim::Console console{std::cout, std::cerr, evsim::ColorWanted(STDOUT_FILENO)};
    if (*run) return evsim::CmdRun(config_path, out_dir, console);
    if (*sweep) {
        std::vector<std::filesystem::path> paths(sweep_configs.begin(), sweep_configs.end());
        return evsim::CmdSweep(paths, out_dir, jobs, gnuplot, console);
    }
    if (*topology) {
        if (!export_path.empty()) topo.export_path = export_path;
        return evsim::CmdTopology(topo, console);
    }
    std::optional<std::filesystem::path> proof;
    if (!proof_path.empty()) proof = proof_path;
    return evsim::CmdVerify(headers_path, proof, console);
}
