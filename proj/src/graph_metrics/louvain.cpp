#include <algorithm>
#include <numeric>
#include <random>
#include <unordered_map>

#include "toxconv/errors.hpp"
#include "toxconv/graph_metrics.hpp"

namespace toxconv::metrics {

namespace {

// Weighted undirected graph with self-loops, used for the aggregated levels.
// self[u] holds twice the internal weight collapsed into u, matching the
// usual convention that a self-loop contributes 2w to the degree.
struct WGraph {
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;
    std::vector<double> self;
    std::size_t size() const { return adj.size(); }
};

double weighted_modularity(const WGraph& g, const std::vector<std::uint32_t>& comm, double m2) {
    if (m2 == 0.0) return 0.0;
    std::size_t k = 0;
    for (auto c : comm) k = std::max<std::size_t>(k, c + 1);
    std::vector<double> in(k, 0.0), tot(k, 0.0);
    for (std::uint32_t u = 0; u < g.size(); ++u) {
        double deg = g.self[u];
        in[comm[u]] += g.self[u];
        for (auto [v, w] : g.adj[u]) {
            deg += w;
            if (comm[v] == comm[u]) in[comm[u]] += w;
        }
        tot[comm[u]] += deg;
    }
    double q = 0.0;
    for (std::size_t c = 0; c < k; ++c) q += in[c] / m2 - (tot[c] / m2) * (tot[c] / m2);
    return q;
}

// One pass of local moving. Returns true if any node changed community.
bool local_moves(const WGraph& g, std::vector<std::uint32_t>& comm, double m2, std::mt19937_64& rng) {
    const std::size_t n = g.size();
    std::vector<double> deg(n, 0.0), tot(n, 0.0);
    for (std::uint32_t u = 0; u < n; ++u) {
        deg[u] = g.self[u];
        for (auto [v, w] : g.adj[u]) deg[u] += w;
        tot[comm[u]] += deg[u];
    }
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::shuffle(order.begin(), order.end(), rng);

    bool any = false;
    std::vector<double> link(n, 0.0);
    std::vector<std::uint32_t> touched;
    for (bool improved = true; improved;) {
        improved = false;
        for (std::uint32_t u : order) {
            const std::uint32_t cu = comm[u];
            touched.clear();
            for (auto [v, w] : g.adj[u]) {
                const auto cv = comm[v];
                if (link[cv] == 0.0) touched.push_back(cv);
                link[cv] += w;
            }
            tot[cu] -= deg[u];
            // Gain of inserting u into c, up to terms constant in c.
            auto gain = [&](std::uint32_t c) { return link[c] - tot[c] * deg[u] / m2; };
            std::uint32_t best = cu;
            double best_gain = gain(cu);
            std::sort(touched.begin(), touched.end());
            for (auto c : touched) {
                const double gc = gain(c);
                if (gc > best_gain + 1e-12) {
                    best_gain = gc;
                    best = c;
                }
            }
            tot[best] += deg[u];
            comm[u] = best;
            if (best != cu) {
                improved = true;
                any = true;
            }
            for (auto c : touched) link[c] = 0.0;
            link[cu] = 0.0;
        }
    }
    return any;
}

std::vector<std::uint32_t> relabel_dense(std::vector<std::uint32_t>& comm) {
    std::unordered_map<std::uint32_t, std::uint32_t> ids;
    for (auto& c : comm) {
        auto [it, fresh] = ids.try_emplace(c, static_cast<std::uint32_t>(ids.size()));
        c = it->second;
    }
    return comm;
}

WGraph aggregate(const WGraph& g, const std::vector<std::uint32_t>& comm, std::size_t k) {
    WGraph out;
    out.adj.resize(k);
    out.self.assign(k, 0.0);
    std::vector<std::unordered_map<std::uint32_t, double>> acc(k);
    for (std::uint32_t u = 0; u < g.size(); ++u) {
        out.self[comm[u]] += g.self[u];
        for (auto [v, w] : g.adj[u]) {
            if (comm[v] == comm[u]) out.self[comm[u]] += w;
            else acc[comm[u]][comm[v]] += w;
        }
    }
    for (std::uint32_t c = 0; c < k; ++c) {
        out.adj[c].assign(acc[c].begin(), acc[c].end());
        std::sort(out.adj[c].begin(), out.adj[c].end());
    }
    return out;
}

}  // namespace

double modularity(const UGraph& g, std::span<const std::uint32_t> community) {
    if (community.size() != g.size()) throw InvalidArgument("community vector has wrong length");
    const double m = static_cast<double>(g.edge_count());
    if (m == 0.0) return 0.0;
    std::size_t k = 0;
    for (auto c : community) k = std::max<std::size_t>(k, c + 1);
    std::vector<double> internal(k, 0.0), tot(k, 0.0);
    for (NodeId u = 0; u < g.size(); ++u) {
        tot[community[u]] += static_cast<double>(g.degree(u));
        for (NodeId v : g.adj(u))
            if (u < v && community[u] == community[v]) internal[community[u]] += 1.0;
    }
    double q = 0.0;
    for (std::size_t c = 0; c < k; ++c) q += internal[c] / m - (tot[c] / (2.0 * m)) * (tot[c] / (2.0 * m));
    return q;
}

Partition louvain(const UGraph& g, std::uint64_t seed) {
    Partition p;
    const std::size_t n = g.size();
    p.community.resize(n);
    std::iota(p.community.begin(), p.community.end(), 0u);
    p.community_count = n;
    if (g.edge_count() == 0) return p;

    WGraph level;
    level.adj.resize(n);
    level.self.assign(n, 0.0);
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v : g.adj(u)) level.adj[u].emplace_back(v, 1.0);
    const double m2 = 2.0 * static_cast<double>(g.edge_count());

    std::mt19937_64 rng(seed);
    std::vector<std::uint32_t> node_comm = p.community;
    while (true) {
        std::vector<std::uint32_t> comm(level.size());
        std::iota(comm.begin(), comm.end(), 0u);
        const bool moved = local_moves(level, comm, m2, rng);
        relabel_dense(comm);
        const std::size_t k = comm.empty() ? 0 : *std::max_element(comm.begin(), comm.end()) + 1;
        for (auto& c : node_comm) c = comm[c];
        p.level_modularity.push_back(weighted_modularity(level, comm, m2));
        if (!moved || k == level.size()) break;
        level = aggregate(level, comm, k);
    }
    p.community = node_comm;
    p.community_count = p.community.empty() ? 0 : *std::max_element(p.community.begin(), p.community.end()) + 1;
    p.modularity = modularity(g, p.community);
    return p;
}

Partition louvain(const Digraph& g, std::uint64_t seed) { return louvain(UGraph::from(g), seed); }

}  // namespace toxconv::metrics
