// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <evsim/chain/hash.hpp>
#include <evsim/metrics/metrics.hpp>
#include <evsim/net/simulation.hpp>
#include <evsim/net/topology.hpp>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace evsim {

/// A configuration problem. field is a dotted path such as
/// "miners[2].alpha"; line is 0 when the source position is unknown.
class ConfigError : public std::runtime_error
{
public:
    ConfigError(std::string field, int line, const std::string& what);

    const std::string& field() const { return field_; }
    int line() const { return line_; }

private:
    std::string field_;
    int line_;
};

/// Dotted field path -> 1-based source line.
using SourceLines = std::map<std::string, int>;

struct ConfigDocument {
    nlohmann::json doc;
    SourceLines lines;
    std::string origin; // file name for diagnostics
};

/// Reads TOML (by default) or JSON (".json" suffix) into one document form.
ConfigDocument LoadConfigDocument(const std::filesystem::path& path);
ConfigDocument ParseConfigText(const std::string& text, bool json, const std::string& origin = "<config>");

struct SweepSpec {
    std::string parameter; // dotted path, "*" matches every array element
    std::vector<nlohmann::json> values;
};

struct SweepPoint {
    size_t index = 0;
    std::string parameter;
    nlohmann::json value;
};

struct ScenarioConfig {
    std::string name;
    uint64_t seed = 0;
    double duration_s = 0.0;
    TopologySpec topology;
    std::vector<MinerAgent> miners; // ids resolved by BuildSimConfig
    std::vector<std::optional<NodeId>> miner_nodes;
    RelayStrategy relay;
    PowParams pow;
    BlockParams block;
    double observer_bandwidth_bps = 100e6;
    size_t max_extension_blocks = 100;
    MetricsConfig metrics;
    std::optional<SweepSpec> sweep;
    std::optional<SweepPoint> sweep_point;

    /// Every field with defaults filled in; keys sorted, so dump() is canonical.
    nlohmann::json ToJson() const;
    Hash256 Digest() const;
    /// "<parameter leaf>=<value>" for a sweep child, empty otherwise.
    std::string Label() const;
};

/// Throws ConfigError on the first invalid or unknown field.
ScenarioConfig ParseScenario(const ConfigDocument& doc);
ScenarioConfig LoadScenario(const std::filesystem::path& path);

/// First 8 little-endian bytes of Sha256d(seed || index).
uint64_t ChildSeed(uint64_t seed, uint64_t index);

/**
 * One child per sweep value, with the value written at the parameter path
 * and the seed replaced by ChildSeed(seed, index). A document without a
 * sweep yields itself as a single child.
 */
std::vector<ScenarioConfig> ExpandSweep(const ConfigDocument& doc);

/// Generates the topology and places the miners.
SimConfig BuildSimConfig(const ScenarioConfig& config);

} // namespace evsim
