#include <algorithm>

#include "toxconv/errors.hpp"
#include "toxconv/graph_metrics.hpp"

namespace toxconv::metrics {

namespace {

// Sum over ordered pairs of distances = 2 * sum over edges of s * (n - s),
// where s is the size of the subtree below the edge. `order` must list
// every node after its parent.
std::uint64_t ordered_pair_distance_sum(std::span<const std::uint32_t> parent,
                                        std::span<const std::uint32_t> order) {
    const std::size_t n = parent.size();
    std::vector<std::uint64_t> sub(n, 1);
    std::uint64_t total = 0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const std::uint32_t v = *it;
        if (v == 0) continue;
        total += 2 * sub[v] * (n - sub[v]);
        sub[parent[v]] += sub[v];
    }
    return total;
}

}  // namespace

double wiener_index(std::span<const std::uint32_t> parent) {
    const std::size_t n = parent.size();
    if (n < 2) throw SizeTooSmall("wiener index needs at least two nodes");
    // Parents may have larger indices than children, so order by depth first.
    std::vector<std::vector<std::uint32_t>> children(n);
    for (std::uint32_t v = 1; v < n; ++v) {
        if (parent[v] >= n) throw InvalidArgument("parent index out of range");
        children[parent[v]].push_back(v);
    }
    std::vector<std::uint32_t> order;
    order.reserve(n);
    order.push_back(0);
    for (std::size_t i = 0; i < order.size(); ++i)
        for (auto c : children[order[i]]) order.push_back(c);
    if (order.size() != n) throw InvalidArgument("parent array does not describe a tree");
    const auto total = ordered_pair_distance_sum(parent, order);
    return static_cast<double>(total) / static_cast<double>(n * (n - 1));
}

double wiener_index(const ReplyTree& tree) {
    const std::size_t n = tree.size();
    if (n < 2) throw SizeTooSmall("wiener index needs at least two nodes");
    std::vector<std::uint32_t> parent(n, 0);
    for (ReplyTree::Index i = 1; i < n; ++i) parent[i] = tree.parent(i);
    return wiener_index(parent);
}

TreeShape tree_shape(const ReplyTree& tree) {
    TreeShape s;
    s.size = tree.size();
    for (auto d : tree.depths()) {
        if (d >= s.nodes_at_depth.size()) s.nodes_at_depth.resize(d + 1, 0);
        ++s.nodes_at_depth[d];
    }
    s.depth = s.nodes_at_depth.empty() ? 0 : s.nodes_at_depth.size() - 1;
    s.width = s.nodes_at_depth.empty() ? 0 : *std::max_element(s.nodes_at_depth.begin(), s.nodes_at_depth.end());
    if (s.size >= 2) s.wiener = wiener_index(tree);
    return s;
}

}  // namespace toxconv::metrics
