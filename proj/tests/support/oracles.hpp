// Brute-force reference implementations shared by unit and acceptance tests.
// They favour obviousness over speed and share no code with the library.
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "toxconv/graph.hpp"

namespace oracle {

inline std::vector<std::string> node_labels(std::size_t n) {
    std::vector<std::string> out;
    char buf[32];
    for (std::size_t i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof buf, "n%04zu", i);
        out.emplace_back(buf);
    }
    return out;
}

// Random recursive tree: parent[i] uniform in [0, i).
inline std::vector<std::uint32_t> random_tree(std::size_t n, std::mt19937_64& rng) {
    std::vector<std::uint32_t> parent(n, 0);
    for (std::size_t i = 1; i < n; ++i)
        parent[i] = static_cast<std::uint32_t>(std::uniform_int_distribution<std::size_t>(0, i - 1)(rng));
    return parent;
}

// Mean BFS distance over ordered pairs of distinct nodes.
inline double wiener_bfs(const std::vector<std::uint32_t>& parent) {
    const std::size_t n = parent.size();
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 1; i < n; ++i) {
        adj[i].push_back(parent[i]);
        adj[parent[i]].push_back(i);
    }
    std::uint64_t total = 0;
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<int> dist(n, -1);
        std::queue<std::size_t> q;
        dist[s] = 0;
        q.push(s);
        while (!q.empty()) {
            auto u = q.front();
            q.pop();
            total += static_cast<std::uint64_t>(dist[u]);
            for (auto v : adj[u])
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    q.push(v);
                }
        }
    }
    return static_cast<double>(total) / (static_cast<double>(n) * static_cast<double>(n - 1));
}

inline toxconv::Digraph random_digraph(std::size_t n, double p, std::mt19937_64& rng) {
    toxconv::Digraph g(node_labels(n));
    std::bernoulli_distribution coin(p);
    for (toxconv::NodeId u = 0; u < n; ++u)
        for (toxconv::NodeId v = 0; v < n; ++v)
            if (u != v && coin(rng)) g.add_edge(u, v);
    return g;
}

// Triad class names in the census order, each with one template edge list on
// nodes {0, 1, 2}.
struct TriadTemplate {
    const char* name;
    std::vector<std::pair<int, int>> edges;
};

inline const std::vector<TriadTemplate>& triad_templates() {
    static const std::vector<TriadTemplate> t{
        {"003", {}},
        {"012", {{0, 1}}},
        {"102", {{0, 1}, {1, 0}}},
        {"021D", {{1, 0}, {1, 2}}},
        {"021U", {{0, 1}, {2, 1}}},
        {"021C", {{0, 1}, {1, 2}}},
        {"111D", {{0, 1}, {1, 0}, {2, 1}}},
        {"111U", {{0, 1}, {1, 0}, {1, 2}}},
        {"030T", {{0, 1}, {2, 1}, {0, 2}}},
        {"030C", {{2, 1}, {1, 0}, {0, 2}}},
        {"201", {{0, 1}, {1, 0}, {1, 2}, {2, 1}}},
        {"120D", {{1, 0}, {1, 2}, {0, 2}, {2, 0}}},
        {"120U", {{0, 1}, {2, 1}, {0, 2}, {2, 0}}},
        {"120C", {{0, 1}, {1, 2}, {0, 2}, {2, 0}}},
        {"210", {{0, 1}, {1, 2}, {2, 1}, {0, 2}, {2, 0}}},
        {"300", {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {0, 2}, {2, 0}}},
    };
    return t;
}

inline int edge_bit(int a, int b) {
    static const int bit[3][3] = {{-1, 0, 2}, {1, -1, 4}, {3, 5, -1}};
    return bit[a][b];
}

// Class index of every 6-bit triad adjacency mask, built by applying all six
// node permutations to each template.
inline const std::array<int, 64>& triad_class_of_mask() {
    static const std::array<int, 64> table = [] {
        std::array<int, 64> out;
        out.fill(-1);
        const auto& ts = triad_templates();
        for (int c = 0; c < static_cast<int>(ts.size()); ++c) {
            std::array<int, 3> perm{0, 1, 2};
            do {
                int mask = 0;
                for (auto [a, b] : ts[c].edges) mask |= 1 << edge_bit(perm[a], perm[b]);
                out[mask] = c;
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
        return out;
    }();
    return table;
}

inline std::array<std::uint64_t, 16> triad_census_brute(const toxconv::Digraph& g) {
    std::array<std::uint64_t, 16> counts{};
    const auto n = static_cast<toxconv::NodeId>(g.size());
    for (toxconv::NodeId a = 0; a < n; ++a)
        for (toxconv::NodeId b = a + 1; b < n; ++b)
            for (toxconv::NodeId c = b + 1; c < n; ++c) {
                const toxconv::NodeId v[3] = {a, b, c};
                int mask = 0;
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j)
                        if (i != j && g.has_edge(v[i], v[j])) mask |= 1 << edge_bit(i, j);
                ++counts[triad_class_of_mask()[mask]];
            }
    return counts;
}

// Q = 1/(2m) * sum_ij [A_ij - k_i k_j / 2m] delta(c_i, c_j) on an undirected
// simple graph given as an adjacency matrix.
inline double modularity_direct(const std::vector<std::vector<int>>& A, const std::vector<std::uint32_t>& c) {
    const std::size_t n = A.size();
    std::vector<double> k(n, 0.0);
    double two_m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            k[i] += A[i][j];
            two_m += A[i][j];
        }
    if (two_m == 0.0) return 0.0;
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (c[i] == c[j]) q += A[i][j] - k[i] * k[j] / two_m;
    return q / two_m;
}

}  // namespace oracle
