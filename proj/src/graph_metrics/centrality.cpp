#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>

#include "toxconv/errors.hpp"
#include "toxconv/graph_metrics.hpp"
#include "toxconv/kernels.hpp"

namespace toxconv::metrics {

namespace {

// Adjacency as plain successor lists; undirected mode symmetrizes.
std::vector<std::vector<NodeId>> successors(const Digraph& g, bool directed) {
    std::vector<std::vector<NodeId>> adj(g.size());
    if (directed) {
        for (NodeId u = 0; u < g.size(); ++u)
            for (const auto& nb : g.out(u)) adj[u].push_back(nb.node);
        return adj;
    }
    const UGraph ug = UGraph::from(g);
    for (NodeId u = 0; u < ug.size(); ++u) adj[u].assign(ug.adj(u).begin(), ug.adj(u).end());
    return adj;
}

struct Csr {
    std::vector<std::uint32_t> row_ptr, col;
    std::vector<double> val;
    kernels::CsrView view() const { return {row_ptr, col, val}; }
};

// Row v lists the predecessors u of v in `succ`, weighted by weight(u).
template <typename W>
Csr transpose_csr(const std::vector<std::vector<NodeId>>& succ, W&& weight) {
    const std::size_t n = succ.size();
    std::vector<std::vector<std::pair<NodeId, double>>> rows(n);
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v : succ[u]) rows[v].emplace_back(u, weight(u));
    Csr m;
    m.row_ptr.push_back(0);
    for (auto& r : rows) {
        std::sort(r.begin(), r.end());
        for (auto [c, w] : r) {
            m.col.push_back(c);
            m.val.push_back(w);
        }
        m.row_ptr.push_back(static_cast<std::uint32_t>(m.col.size()));
    }
    return m;
}

std::vector<double> degree_scores(const Digraph& g, bool directed) {
    std::vector<double> out(g.size());
    if (directed) {
        for (NodeId u = 0; u < g.size(); ++u) out[u] = static_cast<double>(g.in_degree(u) + g.out_degree(u));
        return out;
    }
    const UGraph ug = UGraph::from(g);
    for (NodeId u = 0; u < ug.size(); ++u) out[u] = static_cast<double>(ug.degree(u));
    return out;
}

std::vector<double> betweenness_scores(const Digraph& g, bool directed) {
    const auto adj = successors(g, directed);
    const std::size_t n = adj.size();
    std::vector<double> cb(n, 0.0), sigma(n), delta(n);
    std::vector<int> dist(n);
    std::vector<std::vector<NodeId>> pred(n);
    std::vector<NodeId> stack;
    std::queue<NodeId> q;
    for (NodeId s = 0; s < n; ++s) {
        for (std::size_t i = 0; i < n; ++i) {
            pred[i].clear();
            sigma[i] = 0.0;
            dist[i] = -1;
            delta[i] = 0.0;
        }
        sigma[s] = 1.0;
        dist[s] = 0;
        q.push(s);
        stack.clear();
        while (!q.empty()) {
            const NodeId v = q.front();
            q.pop();
            stack.push_back(v);
            for (NodeId w : adj[v]) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    q.push(w);
                }
                if (dist[w] == dist[v] + 1) {
                    sigma[w] += sigma[v];
                    pred[w].push_back(v);
                }
            }
        }
        for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
            const NodeId w = *it;
            for (NodeId v : pred[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            if (w != s) cb[w] += delta[w];
        }
    }
    if (!directed)
        for (double& x : cb) x /= 2.0;
    return cb;
}

std::vector<double> closeness_scores(const Digraph& g, bool directed) {
    const auto adj = successors(g, directed);
    const std::size_t n = adj.size();
    std::vector<double> out(n, 0.0);
    if (n < 2) return out;
    std::vector<int> dist(n);
    std::queue<NodeId> q;
    for (NodeId s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[s] = 0;
        q.push(s);
        double h = 0.0;
        while (!q.empty()) {
            const NodeId v = q.front();
            q.pop();
            if (v != s) h += 1.0 / dist[v];
            for (NodeId w : adj[v])
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    q.push(w);
                }
        }
        out[s] = h / static_cast<double>(n - 1);
    }
    return out;
}

std::vector<double> eigenvector_scores(const Digraph& g, bool directed) {
    const std::size_t n = g.size();
    std::vector<double> out(n, 0.0);
    if (n == 0) return out;
    const auto comps = weakly_connected_components(g);
    std::size_t best = 0;
    for (std::size_t i = 1; i < comps.size(); ++i)
        if (comps[i].size() > comps[best].size()) best = i;
    const auto& nodes = comps[best];
    const Digraph sub = g.induced(nodes);
    const std::size_t k = sub.size();

    // x <- (A^T + I) x: a node's score grows with the scores of nodes pointing
    // at it. The identity shift keeps bipartite components from oscillating.
    const Csr m = transpose_csr(successors(sub, directed), [](NodeId) { return 1.0; });
    std::vector<double> x(k, 1.0 / std::sqrt(static_cast<double>(k))), y(k), diff(k);
    for (int iter = 0; iter < 10000; ++iter) {
        kernels::spmv(m.view(), x, y);
        kernels::axpy(1.0, x, y);
        const double norm = std::sqrt(kernels::dot(y, y));
        if (norm == 0.0) break;
        kernels::scale(1.0 / norm, y);
        const double change = kernels::l1_dist(x, y);
        std::swap(x, y);
        if (change < 1e-10 * static_cast<double>(k)) break;
    }
    for (std::size_t i = 0; i < k; ++i) out[nodes[i]] = x[i];
    return out;
}

std::vector<double> pagerank_scores(const Digraph& g, bool directed) {
    constexpr double kDamping = 0.85;
    const std::size_t n = g.size();
    if (n == 0) return {};
    const auto succ = successors(g, directed);
    const Csr m = transpose_csr(succ, [&](NodeId u) { return 1.0 / static_cast<double>(succ[u].size()); });
    const double nd = static_cast<double>(n);
    std::vector<double> x(n, 1.0 / nd), y(n);
    for (int iter = 0; iter < 10000; ++iter) {
        double dangling = 0.0;
        for (NodeId u = 0; u < n; ++u)
            if (succ[u].empty()) dangling += x[u];
        kernels::spmv(m.view(), x, y);
        kernels::scale(kDamping, y);
        const double base = (1.0 - kDamping) / nd + kDamping * dangling / nd;
        for (double& v : y) v += base;
        const double change = kernels::l1_dist(x, y);
        std::swap(x, y);
        if (change < 1e-10) break;
    }
    const double total = kernels::sum(x);
    kernels::scale(1.0 / total, x);
    return x;
}

Digraph star(std::size_t n, bool directed) {
    std::vector<std::string> labels(n);
    char buf[32];
    for (std::size_t i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof buf, "%020zu", i);
        labels[i] = buf;
    }
    Digraph s(std::move(labels));
    for (NodeId i = 1; i < n; ++i) {
        s.add_edge(0, i);
        if (directed) s.add_edge(i, 0);
    }
    return s;
}

double freeman_sum(std::span<const double> scores) {
    const double mx = *std::max_element(scores.begin(), scores.end());
    double s = 0.0;
    for (double c : scores) s += mx - c;
    return s;
}

}  // namespace

std::string_view centrality_name(Centrality kind) {
    switch (kind) {
        case Centrality::Degree: return "degree";
        case Centrality::Betweenness: return "betweenness";
        case Centrality::Closeness: return "closeness";
        case Centrality::Eigenvector: return "eigenvector";
        case Centrality::PageRank: return "pagerank";
    }
    return "unknown";
}

std::vector<double> centrality(const Digraph& g, Centrality kind, bool directed) {
    switch (kind) {
        case Centrality::Degree: return degree_scores(g, directed);
        case Centrality::Betweenness: return betweenness_scores(g, directed);
        case Centrality::Closeness: return closeness_scores(g, directed);
        case Centrality::Eigenvector: return eigenvector_scores(g, directed);
        case Centrality::PageRank: return pagerank_scores(g, directed);
    }
    throw InvalidArgument("unknown centrality kind");
}

double centralization_from_scores(std::span<const double> scores, Centrality kind, bool directed) {
    const std::size_t n = scores.size();
    if (n < 3) throw SizeTooSmall("centralization needs at least three nodes");
    const double numer = freeman_sum(scores);
    double denom = 0.0;
    if (kind == Centrality::Eigenvector || kind == Centrality::PageRank) {
        denom = static_cast<double>(n - 1) * *std::max_element(scores.begin(), scores.end());
    } else {
        // Directed graphs compare against a star with edges both ways.
        const auto ref = centrality(star(n, directed), kind, directed);
        denom = freeman_sum(ref);
    }
    if (denom <= 0.0) return 0.0;
    return std::clamp(numer / denom, 0.0, 1.0);
}

double centralization(const Digraph& g, Centrality kind, bool directed) {
    if (g.size() < 3) throw SizeTooSmall("centralization needs at least three nodes");
    const auto scores = centrality(g, kind, directed);
    return centralization_from_scores(scores, kind, directed);
}

}  // namespace toxconv::metrics
