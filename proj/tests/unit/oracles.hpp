// Copyright (c) 2026 The evsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

// Reference computations used only by tests. Each is written independently of
// the library code path it checks.

#pragma once

#include <evsim/chain/hash.hpp>

#include <openssl/sha.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <fstream>
#include <string>
#include <vector>

namespace evsim::oracle {

/// Double SHA-256 through OpenSSL's one-shot call rather than the EVP path.
inline Hash256 Sha256dOracle(const std::vector<uint8_t>& data)
{
    uint8_t once[SHA256_DIGEST_LENGTH];
    uint8_t twice[SHA256_DIGEST_LENGTH];
    SHA256(data.data(), data.size(), once);
    SHA256(once, sizeof(once), twice);
    return Hash256(std::span<const uint8_t, 32>(twice, 32));
}

inline Hash256 TreeHash(std::vector<Hash256> level)
{
    if (level.size() == 1) return level[0];
    if (level.size() % 2) level.push_back(level.back());
    std::vector<Hash256> up;
    for (size_t i = 0; i < level.size(); i += 2) up.push_back(HashPair(level[i], level[i + 1]));
    return TreeHash(up);
}

/// All-pairs hop distances via BFS over an adjacency matrix.
inline std::vector<std::vector<int>> HopMatrix(size_t n, const std::vector<std::pair<uint32_t, uint32_t>>& edges)
{
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (auto [a, b] : edges) adj[a][b] = adj[b][a] = 1;
    std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
    for (size_t s = 0; s < n; ++s) {
        std::deque<size_t> q{s};
        dist[s][s] = 0;
        while (!q.empty()) {
            size_t u = q.front();
            q.pop_front();
            for (size_t v = 0; v < n; ++v) {
                if (adj[u][v] && dist[s][v] < 0) {
                    dist[s][v] = dist[s][u] + 1;
                    q.push_back(v);
                }
            }
        }
    }
    return dist;
}

inline double MeanHops(const std::vector<std::vector<int>>& dist)
{
    double sum = 0;
    const size_t n = dist.size();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (i != j) sum += dist[i][j];
    return sum / (static_cast<double>(n) * static_cast<double>(n - 1));
}

/// Mean local clustering from triangle counts on an adjacency matrix.
inline double Clustering(size_t n, const std::vector<std::pair<uint32_t, uint32_t>>& edges)
{
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (auto [a, b] : edges) adj[a][b] = adj[b][a] = 1;
    double total = 0;
    for (size_t v = 0; v < n; ++v) {
        std::vector<size_t> nb;
        for (size_t u = 0; u < n; ++u)
            if (adj[v][u]) nb.push_back(u);
        if (nb.size() < 2) continue;
        size_t tri = 0;
        for (size_t i = 0; i < nb.size(); ++i)
            for (size_t j = i + 1; j < nb.size(); ++j) tri += adj[nb[i]][nb[j]];
        total += 2.0 * static_cast<double>(tri) / (static_cast<double>(nb.size()) * static_cast<double>(nb.size() - 1));
    }
    return total / static_cast<double>(n);
}

/// Probability that an attacker with share q ever erases a deficit of z blocks.
inline double CatchUpProbability(double q, int z)
{
    const double p = 1.0 - q;
    return q >= p ? 1.0 : std::pow(q / p, z);
}

inline std::vector<std::string> ReadLines(const std::string& path)
{
    std::ifstream in(path);
    std::vector<std::string> out;
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) out.push_back(line);
    return out;
}

} // namespace evsim::oracle
