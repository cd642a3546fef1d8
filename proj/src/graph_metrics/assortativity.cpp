#include <cmath>
#include <map>

#include "toxconv/errors.hpp"
#include "toxconv/graph_metrics.hpp"

namespace toxconv::metrics {

namespace {

template <typename Visit>
void for_each_oriented_edge(const Digraph& g, bool directed, Visit&& visit) {
    if (directed) {
        for (NodeId u = 0; u < g.size(); ++u)
            for (const auto& nb : g.out(u)) visit(u, nb.node);
        return;
    }
    const UGraph ug = UGraph::from(g);
    for (NodeId u = 0; u < ug.size(); ++u)
        for (NodeId v : ug.adj(u)) visit(u, v);
}

}  // namespace

double assortativity_categorical(const Digraph& g, std::span<const int> labels, bool directed) {
    if (labels.size() != g.size()) throw InvalidArgument("label vector has wrong length");
    std::map<std::pair<int, int>, double> e;
    std::map<int, double> a, b;
    double total = 0.0;
    for_each_oriented_edge(g, directed, [&](NodeId u, NodeId v) {
        if (labels[u] < 0 || labels[v] < 0) return;
        e[{labels[u], labels[v]}] += 1.0;
        a[labels[u]] += 1.0;
        b[labels[v]] += 1.0;
        total += 1.0;
    });
    if (total == 0.0) throw UndefinedMixing("no edge joins two labelled nodes");
    double trace = 0.0, ab = 0.0;
    for (const auto& [key, w] : e)
        if (key.first == key.second) trace += w / total;
    for (const auto& [cat, w] : a)
        if (auto it = b.find(cat); it != b.end()) ab += (w / total) * (it->second / total);
    if (std::abs(1.0 - ab) < 1e-15) throw UndefinedMixing("only one category among labelled endpoints");
    return (trace - ab) / (1.0 - ab);
}

double assortativity_numeric(const Digraph& g, std::span<const double> values, bool directed) {
    if (values.size() != g.size()) throw InvalidArgument("value vector has wrong length");
    std::vector<double> xs, ys;
    for_each_oriented_edge(g, directed, [&](NodeId u, NodeId v) {
        if (std::isnan(values[u]) || std::isnan(values[v])) return;
        xs.push_back(values[u]);
        ys.push_back(values[v]);
    });
    const std::size_t n = xs.size();
    if (n < 2) throw ZeroVariance("fewer than two qualifying edges");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    const double scale = std::max({1.0, std::abs(mx), std::abs(my)});
    const double tiny = 1e-24 * scale * scale * static_cast<double>(n);
    if (sxx <= tiny || syy <= tiny) throw ZeroVariance("an edge end has zero variance");
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace toxconv::metrics
