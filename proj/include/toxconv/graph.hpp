#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace toxconv {

using NodeId = std::uint32_t;

struct Neighbor {
    NodeId node;
    std::uint32_t weight;
    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Directed graph over string-labelled nodes. Node ids follow the sorted label
// order, adjacency lists are sorted by node id, and self-loops are rejected,
// so two graphs built from the same edges in any order compare equal.
class Digraph {
public:
    Digraph() = default;
    explicit Digraph(std::vector<std::string> labels);

    std::size_t size() const { return labels_.size(); }
    bool empty() const { return labels_.empty(); }
    std::size_t edge_count() const { return edge_count_; }
    std::uint64_t total_weight() const { return total_weight_; }

    const std::string& label(NodeId u) const { return labels_[u]; }
    const std::vector<std::string>& labels() const { return labels_; }
    std::optional<NodeId> find(std::string_view label) const;

    // Adds `weight` to edge u->v. Returns false (and does nothing) for u == v.
    bool add_edge(NodeId u, NodeId v, std::uint32_t weight = 1);
    bool has_edge(NodeId u, NodeId v) const;
    std::uint32_t weight(NodeId u, NodeId v) const;

    std::span<const Neighbor> out(NodeId u) const { return out_[u]; }
    std::span<const Neighbor> in(NodeId u) const { return in_[u]; }
    std::size_t out_degree(NodeId u) const { return out_[u].size(); }
    std::size_t in_degree(NodeId u) const { return in_[u].size(); }

    // Subgraph induced by the given node ids (kept in ascending order).
    Digraph induced(std::span<const NodeId> nodes) const;

    friend bool operator==(const Digraph&, const Digraph&) = default;

private:
    std::vector<std::string> labels_;
    std::vector<std::vector<Neighbor>> out_;
    std::vector<std::vector<Neighbor>> in_;
    std::size_t edge_count_ = 0;
    std::uint64_t total_weight_ = 0;
};

// Simple undirected graph; used for the undirected view of a Digraph.
class UGraph {
public:
    UGraph() = default;
    explicit UGraph(std::size_t n) : adj_(n) {}
    static UGraph from(const Digraph& g);

    std::size_t size() const { return adj_.size(); }
    std::size_t edge_count() const { return edges_; }
    bool add_edge(NodeId u, NodeId v);
    bool has_edge(NodeId u, NodeId v) const;
    std::span<const NodeId> adj(NodeId u) const { return adj_[u]; }
    std::size_t degree(NodeId u) const { return adj_[u].size(); }

    UGraph induced(std::span<const NodeId> nodes) const;
    std::vector<std::pair<NodeId, NodeId>> edges() const;

private:
    std::vector<std::vector<NodeId>> adj_;
    std::size_t edges_ = 0;
};

}  // namespace toxconv
