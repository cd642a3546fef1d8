#include <algorithm>
#include <set>

#include "toxconv/graph_metrics.hpp"

namespace toxconv::metrics {

// Peeling in order of current degree (Batagelj-Zaversnik bucket variant).
std::vector<std::size_t> core_numbers(const UGraph& g) {
    const std::size_t n = g.size();
    std::vector<std::size_t> deg(n);
    for (NodeId u = 0; u < n; ++u) deg[u] = g.degree(u);
    std::set<std::pair<std::size_t, NodeId>> queue;
    for (NodeId u = 0; u < n; ++u) queue.emplace(deg[u], u);
    std::vector<char> removed(n, 0);
    std::vector<std::size_t> core(n, 0);
    std::size_t current = 0;
    while (!queue.empty()) {
        auto [d, u] = *queue.begin();
        queue.erase(queue.begin());
        current = std::max(current, d);
        core[u] = current;
        removed[u] = 1;
        for (NodeId v : g.adj(u)) {
            if (removed[v]) continue;
            queue.erase({deg[v], v});
            --deg[v];
            queue.emplace(deg[v], v);
        }
    }
    return core;
}

Subgraph k_core(const UGraph& g, std::size_t k) {
    const auto core = core_numbers(g);
    Subgraph s;
    for (NodeId u = 0; u < g.size(); ++u)
        if (core[u] >= k) s.nodes.push_back(u);
    for (auto [u, v] : g.edges())
        if (core[u] >= k && core[v] >= k) s.edges.emplace_back(u, v);
    return s;
}

Subgraph k_truss(const UGraph& g, std::size_t k) {
    const std::size_t need = k > 2 ? k - 2 : 0;
    const std::size_t n = g.size();
    std::vector<std::set<NodeId>> adj(n);
    for (auto [u, v] : g.edges()) {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    auto support = [&](NodeId u, NodeId v) {
        std::size_t s = 0;
        const auto& small = adj[u].size() < adj[v].size() ? adj[u] : adj[v];
        const auto& large = adj[u].size() < adj[v].size() ? adj[v] : adj[u];
        for (NodeId w : small) s += large.count(w);
        return s;
    };
    for (bool changed = need > 0; changed;) {
        changed = false;
        for (NodeId u = 0; u < n; ++u) {
            std::vector<NodeId> drop;
            for (NodeId v : adj[u])
                if (u < v && support(u, v) < need) drop.push_back(v);
            for (NodeId v : drop) {
                adj[u].erase(v);
                adj[v].erase(u);
                changed = true;
            }
        }
    }
    Subgraph s;
    for (NodeId u = 0; u < n; ++u) {
        if (!adj[u].empty()) s.nodes.push_back(u);
        for (NodeId v : adj[u])
            if (u < v) s.edges.emplace_back(u, v);
    }
    return s;
}

}  // namespace toxconv::metrics
