#include "toxconv/graph.hpp"

#include <algorithm>

#include "toxconv/errors.hpp"

namespace toxconv {

namespace {

bool insert_weight(std::vector<Neighbor>& list, NodeId v, std::uint32_t w) {
    auto it = std::lower_bound(list.begin(), list.end(), v,
                               [](const Neighbor& a, NodeId b) { return a.node < b; });
    if (it != list.end() && it->node == v) {
        it->weight += w;
        return false;
    }
    list.insert(it, Neighbor{v, w});
    return true;
}

}  // namespace

Digraph::Digraph(std::vector<std::string> labels) : labels_(std::move(labels)) {
    std::sort(labels_.begin(), labels_.end());
    labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
    out_.resize(labels_.size());
    in_.resize(labels_.size());
}

std::optional<NodeId> Digraph::find(std::string_view label) const {
    auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
    if (it == labels_.end() || *it != label) return std::nullopt;
    return static_cast<NodeId>(it - labels_.begin());
}

bool Digraph::add_edge(NodeId u, NodeId v, std::uint32_t weight) {
    if (u >= size() || v >= size()) throw InvalidArgument("edge endpoint out of range");
    if (u == v || weight == 0) return false;
    if (insert_weight(out_[u], v, weight)) ++edge_count_;
    insert_weight(in_[v], u, weight);
    total_weight_ += weight;
    return true;
}

bool Digraph::has_edge(NodeId u, NodeId v) const { return weight(u, v) > 0; }

std::uint32_t Digraph::weight(NodeId u, NodeId v) const {
    const auto& list = out_[u];
    auto it = std::lower_bound(list.begin(), list.end(), v,
                               [](const Neighbor& a, NodeId b) { return a.node < b; });
    return (it != list.end() && it->node == v) ? it->weight : 0;
}

Digraph Digraph::induced(std::span<const NodeId> nodes) const {
    std::vector<NodeId> sorted(nodes.begin(), nodes.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<std::string> labels;
    labels.reserve(sorted.size());
    for (NodeId u : sorted) labels.push_back(labels_[u]);
    Digraph sub(std::move(labels));
    // Label order is preserved by the sort, so position == new id.
    std::vector<std::int64_t> remap(size(), -1);
    for (std::size_t i = 0; i < sorted.size(); ++i) remap[sorted[i]] = static_cast<std::int64_t>(i);
    for (NodeId u : sorted) {
        for (const auto& nb : out_[u]) {
            if (remap[nb.node] >= 0)
                sub.add_edge(static_cast<NodeId>(remap[u]), static_cast<NodeId>(remap[nb.node]), nb.weight);
        }
    }
    return sub;
}

UGraph UGraph::from(const Digraph& g) {
    UGraph u(g.size());
    for (NodeId a = 0; a < g.size(); ++a)
        for (const auto& nb : g.out(a)) u.add_edge(a, nb.node);
    return u;
}

bool UGraph::add_edge(NodeId u, NodeId v) {
    if (u == v) return false;
    auto& a = adj_[u];
    auto it = std::lower_bound(a.begin(), a.end(), v);
    if (it != a.end() && *it == v) return false;
    a.insert(it, v);
    auto& b = adj_[v];
    b.insert(std::lower_bound(b.begin(), b.end(), u), u);
    ++edges_;
    return true;
}

bool UGraph::has_edge(NodeId u, NodeId v) const {
    return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
}

UGraph UGraph::induced(std::span<const NodeId> nodes) const {
    std::vector<std::int64_t> remap(size(), -1);
    for (std::size_t i = 0; i < nodes.size(); ++i) remap[nodes[i]] = static_cast<std::int64_t>(i);
    UGraph sub(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (NodeId v : adj_[nodes[i]])
            if (remap[v] > static_cast<std::int64_t>(i))
                sub.add_edge(static_cast<NodeId>(i), static_cast<NodeId>(remap[v]));
    return sub;
}

std::vector<std::pair<NodeId, NodeId>> UGraph::edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(edges_);
    for (NodeId u = 0; u < size(); ++u)
        for (NodeId v : adj_[u])
            if (u < v) out.emplace_back(u, v);
    return out;
}

}  // namespace toxconv
