#include <algorithm>
#include <cmath>

#include "blocks.hpp"
#include "toxconv/errors.hpp"
#include "toxconv/stats.hpp"

namespace toxconv::features::detail {

void add_dist(FeatureVector& fv, const std::string& base, std::span<const double> v, unsigned which) {
    const bool any = !v.empty();
    auto put = [&](unsigned flag, const char* name, auto&& compute) {
        if (!(which & flag)) return;
        fv.add(base + "." + name, any ? std::optional<double>(compute()) : std::nullopt);
    };
    if (which & kN) fv.add(base + ".n", static_cast<double>(v.size()));
    put(kMean, "mean", [&] { return stats::mean(v); });
    if (which & kVar) fv.add(base + ".var", stats::sample_variance(v));
    if (which & kStd) {
        auto var = stats::sample_variance(v);
        fv.add(base + ".std", var ? std::optional<double>(std::sqrt(*var)) : std::nullopt);
    }
    put(kMin, "min", [&] { return *std::min_element(v.begin(), v.end()); });
    put(kMax, "max", [&] { return *std::max_element(v.begin(), v.end()); });
    put(kQuartiles, "q25", [&] { return stats::quantile(v, 0.25); });
    put(kQuartiles, "q50", [&] { return stats::quantile(v, 0.5); });
    put(kQuartiles, "q75", [&] { return stats::quantile(v, 0.75); });
    put(kHidx, "hidx", [&] { return static_cast<double>(stats::h_index(v)); });
    put(kGini, "gini", [&] { return stats::gini(v); });
    put(kEntropy, "entropy", [&] { return stats::entropy(v); });
    put(kFracPos, "frac_pos", [&] {
        return static_cast<double>(std::count_if(v.begin(), v.end(), [](double x) { return x > 0.0; })) /
               static_cast<double>(v.size());
    });
}

const std::vector<std::string>* friends_of(const FeatureContext& ctx, const std::string& user, Timestamp at) {
    if (ctx.snapshots == nullptr) return nullptr;
    const Snapshot* s = ctx.snapshots->at(user, at);
    return s ? &s->friends : nullptr;
}

std::optional<double> alignment_of(const FeatureContext& ctx, const std::string& user) {
    if (ctx.alignments == nullptr) return std::nullopt;
    auto it = ctx.alignments->find(user);
    if (it == ctx.alignments->end()) return std::nullopt;
    return it->second;
}

NodeAttributes node_attributes(const Digraph& g, const FeatureContext& ctx, Timestamp at) {
    NodeAttributes a;
    const std::size_t n = g.size();
    a.followers.assign(n, kMissing);
    a.friends.assign(n, kMissing);
    a.alignment.assign(n, kMissing);
    for (NodeId u = 0; u < n; ++u) {
        if (ctx.snapshots)
            if (const Snapshot* s = ctx.snapshots->at(g.label(u), at)) {
                a.followers[u] = static_cast<double>(s->follower_count);
                a.friends[u] = static_cast<double>(s->friend_count);
            }
        if (auto al = alignment_of(ctx, g.label(u))) a.alignment[u] = *al;
    }
    return a;
}

Digraph intersect(const Digraph& a, const Digraph& b) {
    if (a.labels() != b.labels()) throw InvalidArgument("intersected graphs must share node labels");
    Digraph out(a.labels());
    for (NodeId u = 0; u < a.size(); ++u)
        for (const auto& nb : a.out(u))
            if (b.has_edge(u, nb.node)) out.add_edge(u, nb.node);
    return out;
}

void add_embeddedness(FeatureVector& fv, const std::string& base, const EmbeddednessSample& s) {
    fv.add(base + ".n", static_cast<double>(s.count.size()));
    add_dist(fv, base + ".count", s.count, kMean | kVar | kEntropy | kGini);
    add_dist(fv, base + ".fraction", s.fraction, kMean | kVar | kEntropy | kGini);
}

namespace {

std::vector<double> finite(std::span<const double> v) {
    std::vector<double> out;
    for (double x : v)
        if (std::isfinite(x)) out.push_back(x);
    return out;
}

template <typename F>
std::optional<double> guarded(F&& f) {
    try {
        return f();
    } catch (const ZeroVariance&) {
        return std::nullopt;
    } catch (const UndefinedMixing&) {
        return std::nullopt;
    } catch (const SizeTooSmall&) {
        return std::nullopt;
    }
}

std::optional<double> undirected_density(std::size_t nodes, std::size_t edges) {
    if (nodes < 2) return std::nullopt;
    const double n = static_cast<double>(nodes);
    return 2.0 * static_cast<double>(edges) / (n * (n - 1.0));
}

void add_subgraph(FeatureVector& fv, const std::string& base, const UGraph& ug, const metrics::Subgraph& s) {
    fv.add(base + ".nodes", static_cast<double>(s.nodes.size()));
    fv.add(base + ".edges", static_cast<double>(s.edges.size()));
    fv.add(base + ".density", undirected_density(s.nodes.size(), s.edges.size()));
    const UGraph sub = ug.induced(s.nodes);
    fv.add(base + ".ccs", static_cast<double>(s.nodes.empty() ? 0 : metrics::connected_components(sub).size()));
}

}  // namespace

void add_graph_block(FeatureVector& fv, const std::string& base, const Digraph& g, const NodeAttributes& attrs,
                     std::uint64_t seed) {
    const std::size_t n = g.size();
    const UGraph ug = UGraph::from(g);
    fv.add(base + ".size", static_cast<double>(n));
    fv.add(base + ".edges", static_cast<double>(g.edge_count()));
    fv.add(base + ".density_dir", guarded([&] { return metrics::density(g, true); }));
    fv.add(base + ".density_undir", guarded([&] { return metrics::density(g, false); }));

    std::vector<double> din(n), dout(n), dtot(n);
    for (NodeId u = 0; u < n; ++u) {
        din[u] = static_cast<double>(g.in_degree(u));
        dout[u] = static_cast<double>(g.out_degree(u));
        dtot[u] = static_cast<double>(ug.degree(u));
    }
    const unsigned deg_stats = kMean | kVar | kFracPos | kHidx | kGini;
    add_dist(fv, base + ".in_degree", din, deg_stats);
    add_dist(fv, base + ".out_degree", dout, deg_stats);
    add_dist(fv, base + ".total_degree", dtot, deg_stats);

    fv.add(base + ".degree_assortativity", guarded([&] { return metrics::assortativity_numeric(g, dtot, false); }));
    {
        std::vector<double> xs, ys;
        for (NodeId u = 0; u < n; ++u)
            for (const auto& nb : g.out(u)) {
                xs.push_back(dout[u]);
                ys.push_back(din[nb.node]);
            }
        fv.add(base + ".in_out_assortativity", stats::pearson(xs, ys));
    }

    const auto census = metrics::dyad_triad_census(g);
    const double pairs = static_cast<double>(n * (n - (n > 0)) / 2);
    const double two_way = static_cast<double>(census.dyads[0]);
    const double one_way = static_cast<double>(census.dyads[1]);
    const double none = static_cast<double>(census.dyads[2]);
    fv.add(base + ".pairs_none", none);
    fv.add(base + ".pairs_one_way", one_way);
    fv.add(base + ".pairs_two_way", two_way);
    auto frac = [&](double x) { return pairs > 0 ? std::optional<double>(x / pairs) : std::nullopt; };
    fv.add(base + ".frac_pairs_none", frac(none));
    fv.add(base + ".frac_pairs_one_way", frac(one_way));
    fv.add(base + ".frac_pairs_two_way", frac(two_way));
    fv.add(base + ".frac_pairs_connected", frac(one_way + two_way));

    for (auto kind : {metrics::Centrality::Betweenness, metrics::Centrality::Closeness,
                      metrics::Centrality::Eigenvector, metrics::Centrality::PageRank}) {
        for (bool directed : {true, false}) {
            fv.add(base + ".centralization_" + std::string(metrics::centrality_name(kind)) +
                       (directed ? "_dir" : "_undir"),
                   guarded([&] { return metrics::centralization(g, kind, directed); }));
        }
    }

    fv.add(base + ".algebraic_connectivity", guarded([&] { return metrics::algebraic_connectivity(ug); }));
    fv.add(base + ".clustering_local", n ? std::optional<double>(metrics::average_clustering(ug)) : std::nullopt);
    fv.add(base + ".clustering_global", metrics::transitivity(ug));
    fv.add(base + ".modularity", metrics::louvain(ug, seed).modularity);

    const auto ccs = metrics::connected_components(ug);
    std::size_t largest = 0;
    for (const auto& c : ccs) largest = std::max(largest, c.size());
    fv.add(base + ".frac_largest_cc", n ? std::optional<double>(static_cast<double>(largest) / n) : std::nullopt);
    for (std::size_t min_size : {1, 2, 3, 5, 10}) {
        const auto count = std::count_if(ccs.begin(), ccs.end(), [&](const auto& c) { return c.size() >= min_size; });
        fv.add(base + ".ccs_ge_" + std::to_string(min_size), static_cast<double>(count));
    }
    for (std::size_t k = 1; k <= 5; ++k) {
        add_subgraph(fv, base + ".kcore_" + std::to_string(k), ug, metrics::k_core(ug, k));
        add_subgraph(fv, base + ".ktruss_" + std::to_string(k), ug, metrics::k_truss(ug, k));
    }

    const unsigned count_stats = kMean | kVar | kHidx | kGini;
    add_dist(fv, base + ".followers", finite(attrs.followers), count_stats);
    add_dist(fv, base + ".friends", finite(attrs.friends), count_stats);
    fv.add(base + ".followers_assortativity",
           guarded([&] { return metrics::assortativity_numeric(g, attrs.followers, false); }));
    fv.add(base + ".friends_assortativity",
           guarded([&] { return metrics::assortativity_numeric(g, attrs.friends, false); }));
    fv.add(base + ".alignment_assortativity",
           guarded([&] { return metrics::assortativity_numeric(g, attrs.alignment, false); }));

    // Users without alignment data share a third block.
    std::vector<std::uint32_t> side(n);
    for (NodeId u = 0; u < n; ++u)
        side[u] = std::isfinite(attrs.alignment[u]) ? (leaning(attrs.alignment[u]) == Leaning::Left ? 0u : 1u) : 2u;
    fv.add(base + ".leaning_modularity", metrics::modularity(ug, side));
}

void add_census_block(FeatureVector& fv, const std::string& base, const Digraph& g) {
    const auto c = metrics::dyad_triad_census(g);
    for (std::size_t i = 0; i < c.dyads.size(); ++i)
        fv.add(base + ".dyad_" + std::string(metrics::CensusCounts::kDyadNames[i]), static_cast<double>(c.dyads[i]));
    for (std::size_t i = 0; i < c.triads.size(); ++i)
        fv.add(base + ".triad_" + std::string(metrics::CensusCounts::kTriadNames[i]),
               static_cast<double>(c.triads[i]));
}

}  // namespace toxconv::features::detail
