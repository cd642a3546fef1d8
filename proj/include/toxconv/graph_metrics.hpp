#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "toxconv/core_model.hpp"
#include "toxconv/graph.hpp"

namespace toxconv::metrics {

// ---------------------------------------------------------------- trees

struct TreeShape {
    std::size_t size = 0;
    std::size_t depth = 0;   // depth of the deepest node; root is 0
    std::size_t width = 0;   // most nodes at any one depth
    std::vector<std::size_t> nodes_at_depth;
    std::optional<double> wiener;  // absent for single-node trees
};

TreeShape tree_shape(const ReplyTree& tree);

// Mean distance over ordered pairs of distinct nodes of the undirected tree,
// computed from subtree sizes in O(n). Throws SizeTooSmall for n < 2.
double wiener_index(const ReplyTree& tree);
// Same, for a tree given as parent indices (parent[0] ignored; parent[i] < n).
double wiener_index(std::span<const std::uint32_t> parent);

// ---------------------------------------------------------------- structure

// |E| / (n(n-1)) directed, 2|E| / (n(n-1)) on the undirected view.
double density(const Digraph& g, bool directed);

// Components are sorted internally and ordered by their smallest node id.
std::vector<std::vector<NodeId>> weakly_connected_components(const Digraph& g);
std::vector<std::vector<NodeId>> connected_components(const UGraph& g);

std::vector<double> local_clustering(const UGraph& g);
double average_clustering(const UGraph& g);
double transitivity(const UGraph& g);

// ---------------------------------------------------------------- communities

struct Partition {
    std::vector<std::uint32_t> community;  // node -> community id, ids dense from 0
    std::size_t community_count = 0;
    double modularity = 0.0;
    std::vector<double> level_modularity;  // Q after each aggregation level
};

// Newman-Girvan modularity of an assignment on an unweighted graph; 0 for an
// edgeless graph.
double modularity(const UGraph& g, std::span<const std::uint32_t> community);

// Two-phase Louvain on the undirected view. Node visiting order is a seeded
// permutation of the sorted node ids, so the result is reproducible.
Partition louvain(const UGraph& g, std::uint64_t seed = 0);
Partition louvain(const Digraph& g, std::uint64_t seed = 0);

// ---------------------------------------------------------------- mixing

// Newman's categorical assortativity. Negative labels mark nodes to ignore.
// Undirected mode counts each edge in both orientations. Throws
// UndefinedMixing if no edge joins labelled nodes or only one category is
// present among them.
double assortativity_categorical(const Digraph& g, std::span<const int> labels, bool directed);

// Pearson correlation of endpoint values over edges (both orientations when
// undirected). NaN values mark nodes to ignore. Throws ZeroVariance when
// fewer than two edges qualify or either end has zero variance.
double assortativity_numeric(const Digraph& g, std::span<const double> values, bool directed);

// ---------------------------------------------------------------- centrality

enum class Centrality { Degree, Betweenness, Closeness, Eigenvector, PageRank };
std::string_view centrality_name(Centrality kind);
inline constexpr std::array<Centrality, 5> kAllCentralities{
    Centrality::Degree, Centrality::Betweenness, Centrality::Closeness, Centrality::Eigenvector,
    Centrality::PageRank};

// Degree: neighbour count (in + out when directed). Betweenness: Brandes,
// unnormalized. Closeness: harmonic, sum of 1/d over reachable nodes divided
// by n - 1 (outgoing paths when directed). Eigenvector: shifted power
// iteration on the largest weakly connected component, unit L2 norm, zero
// elsewhere. PageRank: damping 0.85, tolerance 1e-10, dangling mass spread
// uniformly.
std::vector<double> centrality(const Digraph& g, Centrality kind, bool directed);

// Freeman centralization. Degree, closeness and betweenness normalize by the
// value a star graph of the same order attains; eigenvector and PageRank by
// (n - 1) * max. Throws SizeTooSmall for n < 3.
double centralization(const Digraph& g, Centrality kind, bool directed);
double centralization_from_scores(std::span<const double> scores, Centrality kind, bool directed);

// ---------------------------------------------------------------- cores

struct Subgraph {
    std::vector<NodeId> nodes;                         // ids in the parent graph
    std::vector<std::pair<NodeId, NodeId>> edges;      // u < v
};

std::vector<std::size_t> core_numbers(const UGraph& g);
Subgraph k_core(const UGraph& g, std::size_t k);
// Maximal subgraph whose edges each close at least k - 2 triangles.
Subgraph k_truss(const UGraph& g, std::size_t k);

// ---------------------------------------------------------------- census

struct CensusCounts {
    static constexpr std::array<std::string_view, 3> kDyadNames{"mutual", "asymmetric", "null"};
    static constexpr std::array<std::string_view, 16> kTriadNames{
        "003", "012", "102", "021D", "021U", "021C", "111D", "111U",
        "030T", "030C", "201", "120D", "120U", "120C", "210", "300"};
    std::array<std::uint64_t, 3> dyads{};
    std::array<std::uint64_t, 16> triads{};
};

CensusCounts dyad_triad_census(const Digraph& g);

// ---------------------------------------------------------------- dyads

struct Embeddedness {
    std::size_t count = 0;
    double fraction = 0.0;   // Jaccard; 0 when both sets are empty
    bool missing = false;    // a friend list was unavailable
};

// Friend lists must be sorted; nullptr means unavailable.
Embeddedness embeddedness(const std::vector<std::string>* friends_u, const std::vector<std::string>* friends_v);

// ---------------------------------------------------------------- spectral

// Second-smallest Laplacian eigenvalue of the largest connected component,
// by Lanczos with full reorthogonalization in the complement of the constant
// vector. Throws SizeTooSmall when that component has fewer than two nodes.
double algebraic_connectivity(const UGraph& g);
double algebraic_connectivity(const Digraph& g);

}  // namespace toxconv::metrics
