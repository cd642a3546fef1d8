#include <algorithm>
#include <vector>

#include "toxconv/graph_metrics.hpp"

namespace toxconv::metrics {

namespace {

// Maps a 6-bit triad code to an index into CensusCounts::kTriadNames.
// Bits: 1 v->u, 2 u->v, 4 v->w, 8 w->v, 16 u->w, 32 w->u.
constexpr std::array<std::uint8_t, 64> kTricodes{
    1, 2, 2, 3, 2, 4, 6, 8, 2, 6, 5, 7, 3, 8, 7, 11, 2, 6, 4, 8, 5, 9,
    9, 13, 6, 10, 9, 14, 7, 14, 12, 15, 2, 5, 6, 7, 6, 9, 10, 14, 4, 9,
    9, 12, 8, 13, 14, 15, 3, 7, 8, 11, 7, 12, 14, 15, 8, 14, 13, 15, 11, 15,
    15, 16};

}  // namespace

CensusCounts dyad_triad_census(const Digraph& g) {
    CensusCounts c;
    const std::uint64_t n = g.size();
    const UGraph ug = UGraph::from(g);

    std::uint64_t mutual = 0;
    for (auto [u, v] : ug.edges()) mutual += g.has_edge(u, v) && g.has_edge(v, u);
    const std::uint64_t pairs = n * (n - (n > 0)) / 2;
    c.dyads = {mutual, ug.edge_count() - mutual, pairs - ug.edge_count()};

    auto code = [&](NodeId v, NodeId u, NodeId w) {
        int x = 0;
        x |= g.has_edge(v, u) ? 1 : 0;
        x |= g.has_edge(u, v) ? 2 : 0;
        x |= g.has_edge(v, w) ? 4 : 0;
        x |= g.has_edge(w, v) ? 8 : 0;
        x |= g.has_edge(u, w) ? 16 : 0;
        x |= g.has_edge(w, u) ? 32 : 0;
        return x;
    };

    // Batagelj-Mrvar: each connected triad is visited once from its
    // lowest-ordered edge; triads with a single dyad are counted by formula.
    std::vector<NodeId> nbrs;
    for (NodeId v = 0; v < n; ++v) {
        for (NodeId u : ug.adj(v)) {
            if (u <= v) continue;
            nbrs.clear();
            for (NodeId w : ug.adj(v))
                if (w != u) nbrs.push_back(w);
            for (NodeId w : ug.adj(u))
                if (w != v) nbrs.push_back(w);
            std::sort(nbrs.begin(), nbrs.end());
            nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
            for (NodeId w : nbrs) {
                if (u < w || (v < w && w < u && !ug.has_edge(v, w)))
                    ++c.triads[kTricodes[code(v, u, w)] - 1];
            }
            const std::uint64_t rest = n - nbrs.size() - 2;
            if (g.has_edge(u, v) && g.has_edge(v, u)) c.triads[2] += rest;
            else c.triads[1] += rest;
        }
    }
    const std::uint64_t all = n < 3 ? 0 : n * (n - 1) * (n - 2) / 6;
    std::uint64_t seen = 0;
    for (std::size_t i = 1; i < c.triads.size(); ++i) seen += c.triads[i];
    c.triads[0] = all - seen;
    return c;
}

}  // namespace toxconv::metrics
