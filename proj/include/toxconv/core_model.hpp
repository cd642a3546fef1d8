#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "toxconv/graph.hpp"

namespace toxconv {

using Timestamp = std::int64_t;

struct Post {
    std::string id;
    std::string author;
    std::optional<std::string> parent;
    std::optional<std::string> root;
    Timestamp time = 0;
    std::optional<std::string> text;
    std::optional<double> toxicity;
    std::vector<std::string> mentions;
    std::vector<std::string> url_domains;

    friend bool operator==(const Post&, const Post&) = default;
};

// Throws InvalidArgument when parent == id or toxicity is outside [0, 1].
void validate_post(const Post& post);

// Strict weak order used everywhere posts are sequenced: time, then id.
inline bool earlier(const Post& a, const Post& b) {
    return a.time != b.time ? a.time < b.time : a.id < b.id;
}

// A conversation: one root post and its replies.
//
// Posts are stored by index. Index 0 is the root; replies follow in (time, id)
// order, so index order is arrival order. Child lists are in the same order.
class ReplyTree {
public:
    using Index = std::uint32_t;
    static constexpr Index kNoParent = static_cast<Index>(-1);

    // Validates the tree invariants (single root, every parent present,
    // acyclic) and throws InvalidTree on violation.
    static ReplyTree build(Post root, std::vector<Post> replies, bool orphan_rooted = false);

    std::size_t size() const { return posts_.size(); }
    std::size_t reply_count() const { return posts_.size() - 1; }
    const Post& root() const { return posts_.front(); }
    const Post& post(Index i) const { return posts_[i]; }
    std::span<const Post> posts() const { return posts_; }
    Index parent(Index i) const { return parent_[i]; }
    std::span<const Index> children(Index i) const { return children_[i]; }
    std::optional<Index> find(std::string_view id) const;
    std::uint32_t depth(Index i) const { return depth_[i]; }
    std::span<const std::uint32_t> depths() const { return depth_; }

    // Sorted, deduplicated authors of all posts.
    std::vector<std::string> participants() const;

    // True if the root's own parent was missing from the corpus.
    bool orphan_rooted() const { return orphan_rooted_; }
    // True if some reply is timestamped before its parent.
    bool clock_skew() const { return clock_skew_; }

private:
    std::vector<Post> posts_;
    std::vector<Index> parent_;
    std::vector<std::vector<Index>> children_;
    std::vector<std::uint32_t> depth_;
    std::unordered_map<std::string, Index> index_;
    bool orphan_rooted_ = false;
    bool clock_skew_ = false;
};

// User-level view: edge u->v counts how often u replied to a post by v.
struct ReplyGraph {
    Digraph graph;
};

struct FollowGraph {
    Digraph graph;                     // u->v: u follows v
    std::vector<std::int64_t> follower_count;
    std::vector<std::int64_t> friend_count;
    std::vector<bool> missing;         // no snapshot was available
};

struct ConversationPrefix {
    ReplyTree tree;                    // root + first k replies
    std::size_t k = 0;
    std::vector<Post> suffix;          // remaining replies in arrival order
};

class SnapshotStore;

ReplyGraph reply_graph_from_tree(const ReplyTree& tree);

// Follow relations among `participants`, each user's friend list taken from
// the latest snapshot at or before `at` (earliest snapshot as fallback).
// Throws MissingSnapshotStore when `snapshots` is null.
FollowGraph follow_graph_project(std::span<const std::string> participants,
                                 const SnapshotStore* snapshots, Timestamp at);

// Root plus the k earliest replies. Throws InvalidArgument for k == 0 and
// InvalidTree when a kept reply's parent falls outside the prefix.
ConversationPrefix prefix(const ReplyTree& tree, std::size_t k);

}  // namespace toxconv
