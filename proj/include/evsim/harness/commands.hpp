// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <evsim/harness/config.hpp>
#include <evsim/metrics/metrics.hpp>
#include <evsim/net/simulation.hpp>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace evsim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;

struct Console {
    std::ostream& out;
    std::ostream& err;
    bool color = false;

    /// Wraps text in green or red when color is on.
    std::string Good(const std::string& s) const;
    std::string Bad(const std::string& s) const;
};

/// True when NO_COLOR is unset and the stream is a terminal.
bool ColorWanted(int fd);

struct RunOutputs {
    SimConfig sim;
    SimResult result;
    MetricsReport metrics;
};

RunOutputs RunScenario(const ScenarioConfig& config);

/// message_id,node_id,role,first_receipt_us for every node that received a message.
std::string TraceCsv(const SimResult& result);
std::string BlocksCsv(const SimResult& result);
nlohmann::json MetricsDocument(const ScenarioConfig& config, const MetricsReport& metrics);

inline constexpr const char* kRunFiles[] = {"trace.csv", "blocks.csv", "metrics.json"};

/// Writes the run files plus manifest.json; returns the manifest.
nlohmann::json WriteRunDirectory(const std::filesystem::path& dir, const ScenarioConfig& config, const RunOutputs& outputs);

/// A run directory whose manifest matches the config digest and whose files
/// still hash to the recorded values.
bool RunIsComplete(const std::filesystem::path& dir, const ScenarioConfig& config);

/// Rebuilds the panel inputs from a written metrics.json.
PanelPoint PanelPointFromMetrics(const nlohmann::json& metrics_doc);

std::string GnuplotScript(const std::string& panel_csv_path);

int CmdRun(const std::filesystem::path& config, const std::filesystem::path& out_dir, const Console& console);

struct SweepReport {
    std::vector<std::filesystem::path> run_dirs;
    std::vector<bool> executed;
    std::filesystem::path panel;
};

int CmdSweep(const std::vector<std::filesystem::path>& configs, const std::filesystem::path& out_dir, unsigned jobs,
             bool gnuplot, const Console& console, SweepReport* report = nullptr);

struct TopologyArgs {
    std::string kind;
    std::vector<double> params;
    uint64_t seed = 0;
    size_t miners = 0;
    std::string latency = "constant:10";
    std::optional<std::filesystem::path> export_path;
};

/// Parses "constant:MS", "uniform:LO:HI" or "lognormal:MU:SIGMA".
LatencyModel ParseLatencyArg(const std::string& s);
TopologySpec TopologySpecFromArgs(const TopologyArgs& args);
nlohmann::json TopologySummary(const NetworkGraph& g);

int CmdTopology(const TopologyArgs& args, const Console& console);

int CmdVerify(const std::filesystem::path& headers, const std::optional<std::filesystem::path>& proof, const Console& console);

} // namespace evsim
