#include <algorithm>

#include "toxconv/errors.hpp"
#include "toxconv/graph_metrics.hpp"

namespace toxconv::metrics {

double density(const Digraph& g, bool directed) {
    const double n = static_cast<double>(g.size());
    if (g.size() < 2) throw SizeTooSmall("density needs at least two nodes");
    if (directed) return static_cast<double>(g.edge_count()) / (n * (n - 1.0));
    return 2.0 * static_cast<double>(UGraph::from(g).edge_count()) / (n * (n - 1.0));
}

std::vector<std::vector<NodeId>> connected_components(const UGraph& g) {
    const std::size_t n = g.size();
    std::vector<char> seen(n, 0);
    std::vector<std::vector<NodeId>> out;
    std::vector<NodeId> stack;
    for (NodeId s = 0; s < n; ++s) {
        if (seen[s]) continue;
        std::vector<NodeId> comp;
        seen[s] = 1;
        stack.push_back(s);
        while (!stack.empty()) {
            const NodeId u = stack.back();
            stack.pop_back();
            comp.push_back(u);
            for (NodeId v : g.adj(u))
                if (!seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

std::vector<std::vector<NodeId>> weakly_connected_components(const Digraph& g) {
    return connected_components(UGraph::from(g));
}

std::vector<double> local_clustering(const UGraph& g) {
    const std::size_t n = g.size();
    std::vector<double> c(n, 0.0);
    for (NodeId u = 0; u < n; ++u) {
        const auto nb = g.adj(u);
        const std::size_t d = nb.size();
        if (d < 2) continue;
        std::size_t links = 0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j) links += g.has_edge(nb[i], nb[j]);
        c[u] = 2.0 * static_cast<double>(links) / (static_cast<double>(d) * static_cast<double>(d - 1));
    }
    return c;
}

double average_clustering(const UGraph& g) {
    if (g.size() == 0) return 0.0;
    const auto c = local_clustering(g);
    double s = 0.0;
    for (double x : c) s += x;
    return s / static_cast<double>(c.size());
}

double transitivity(const UGraph& g) {
    std::uint64_t closed = 0, triples = 0;
    for (NodeId u = 0; u < g.size(); ++u) {
        const auto nb = g.adj(u);
        const std::uint64_t d = nb.size();
        triples += d * (d - (d > 0)) / 2;
        for (std::size_t i = 0; i < nb.size(); ++i)
            for (std::size_t j = i + 1; j < nb.size(); ++j) closed += g.has_edge(nb[i], nb[j]);
    }
    // closed counts each triangle once per vertex, i.e. 3 * triangles.
    return triples == 0 ? 0.0 : static_cast<double>(closed) / static_cast<double>(triples);
}

Embeddedness embeddedness(const std::vector<std::string>* fu, const std::vector<std::string>* fv) {
    Embeddedness e;
    if (fu == nullptr || fv == nullptr) {
        e.missing = true;
        return e;
    }
    std::size_t common = 0;
    auto a = fu->begin(), b = fv->begin();
    while (a != fu->end() && b != fv->end()) {
        if (*a < *b) ++a;
        else if (*b < *a) ++b;
        else {
            ++common;
            ++a;
            ++b;
        }
    }
    const std::size_t uni = fu->size() + fv->size() - common;
    e.count = common;
    e.fraction = uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);
    return e;
}

}  // namespace toxconv::metrics
