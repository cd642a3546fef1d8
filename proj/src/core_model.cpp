#include "toxconv/core_model.hpp"

#include <algorithm>
#include <string>

#include "toxconv/errors.hpp"
#include "toxconv/snapshots.hpp"

namespace toxconv {

void validate_post(const Post& post) {
    if (post.id.empty()) throw InvalidArgument("post id is empty");
    if (post.parent && *post.parent == post.id)
        throw InvalidArgument("post " + post.id + " is its own parent");
    if (post.toxicity && !(*post.toxicity >= 0.0 && *post.toxicity <= 1.0))
        throw InvalidArgument("post " + post.id + " has toxicity outside [0,1]");
}

ReplyTree ReplyTree::build(Post root, std::vector<Post> replies, bool orphan_rooted) {
    validate_post(root);
    for (const auto& r : replies) validate_post(r);
    std::sort(replies.begin(), replies.end(), earlier);

    ReplyTree t;
    t.orphan_rooted_ = orphan_rooted;
    t.posts_.reserve(replies.size() + 1);
    t.posts_.push_back(std::move(root));
    for (auto& r : replies) t.posts_.push_back(std::move(r));

    const std::size_t n = t.posts_.size();
    t.index_.reserve(n);
    for (Index i = 0; i < n; ++i) {
        if (!t.index_.emplace(t.posts_[i].id, i).second)
            throw InvalidTree("duplicate post id " + t.posts_[i].id);
    }

    t.parent_.assign(n, kNoParent);
    t.children_.assign(n, {});
    for (Index i = 1; i < n; ++i) {
        const Post& p = t.posts_[i];
        if (!p.parent) throw InvalidTree("reply " + p.id + " has no parent (second root)");
        auto it = t.index_.find(*p.parent);
        if (it == t.index_.end()) throw InvalidTree("parent of " + p.id + " is not in the tree");
        t.parent_[i] = it->second;
        t.children_[it->second].push_back(i);
        if (p.time < t.posts_[it->second].time) t.clock_skew_ = true;
    }

    // Depths by traversal from the root; anything unreached sits on a cycle.
    t.depth_.assign(n, 0);
    std::vector<Index> stack{0};
    std::size_t reached = 0;
    while (!stack.empty()) {
        const Index u = stack.back();
        stack.pop_back();
        ++reached;
        for (Index c : t.children_[u]) {
            t.depth_[c] = t.depth_[u] + 1;
            stack.push_back(c);
        }
    }
    if (reached != n) throw InvalidTree("reply links contain a cycle");
    return t;
}

std::optional<ReplyTree::Index> ReplyTree::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> ReplyTree::participants() const {
    std::vector<std::string> out;
    out.reserve(posts_.size());
    for (const auto& p : posts_) out.push_back(p.author);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ReplyGraph reply_graph_from_tree(const ReplyTree& tree) {
    ReplyGraph rg{Digraph(tree.participants())};
    for (ReplyTree::Index i = 1; i < tree.size(); ++i) {
        const auto& child = tree.post(i);
        const auto& parent = tree.post(tree.parent(i));
        if (child.author == parent.author) continue;
        rg.graph.add_edge(*rg.graph.find(child.author), *rg.graph.find(parent.author));
    }
    return rg;
}

FollowGraph follow_graph_project(std::span<const std::string> participants,
                                 const SnapshotStore* snapshots, Timestamp at) {
    if (snapshots == nullptr) throw MissingSnapshotStore("no snapshot store supplied");
    FollowGraph fg;
    fg.graph = Digraph(std::vector<std::string>(participants.begin(), participants.end()));
    const std::size_t n = fg.graph.size();
    fg.follower_count.assign(n, 0);
    fg.friend_count.assign(n, 0);
    fg.missing.assign(n, false);
    for (NodeId u = 0; u < n; ++u) {
        const Snapshot* s = snapshots->at(fg.graph.label(u), at);
        if (s == nullptr) {
            fg.missing[u] = true;
            continue;
        }
        fg.follower_count[u] = s->follower_count;
        fg.friend_count[u] = s->friend_count;
        // Walk whichever of the two sorted lists is shorter.
        if (s->friends.size() < n) {
            for (const auto& f : s->friends)
                if (auto v = fg.graph.find(f)) fg.graph.add_edge(u, *v);
        } else {
            for (NodeId v = 0; v < n; ++v)
                if (std::binary_search(s->friends.begin(), s->friends.end(), fg.graph.label(v)))
                    fg.graph.add_edge(u, v);
        }
    }
    return fg;
}

ConversationPrefix prefix(const ReplyTree& tree, std::size_t k) {
    if (k == 0) throw InvalidArgument("prefix size must be positive");
    const std::size_t kept = std::min(k, tree.reply_count());
    std::vector<Post> replies;
    replies.reserve(kept);
    for (std::size_t i = 1; i <= kept; ++i) replies.push_back(tree.post(static_cast<ReplyTree::Index>(i)));
    ConversationPrefix p{ReplyTree::build(tree.root(), std::move(replies), tree.orphan_rooted()), k, {}};
    for (std::size_t i = kept + 1; i < tree.size(); ++i)
        p.suffix.push_back(tree.post(static_cast<ReplyTree::Index>(i)));
    return p;
}

void SnapshotStore::add(const std::string& user, Snapshot snapshot) {
    auto& f = snapshot.friends;
    std::sort(f.begin(), f.end());
    f.erase(std::unique(f.begin(), f.end()), f.end());
    f.erase(std::remove(f.begin(), f.end(), user), f.end());
    auto& list = by_user_[user];
    auto it = std::lower_bound(list.begin(), list.end(), snapshot.time,
                               [](const Snapshot& s, std::int64_t t) { return s.time < t; });
    if (it != list.end() && it->time == snapshot.time)
        throw SchemaViolation("duplicate snapshot time for user " + user);
    list.insert(it, std::move(snapshot));
}

const Snapshot* SnapshotStore::at(const std::string& user, std::int64_t t) const {
    auto it = by_user_.find(user);
    if (it == by_user_.end() || it->second.empty()) return nullptr;
    const auto& list = it->second;
    auto ub = std::upper_bound(list.begin(), list.end(), t,
                               [](std::int64_t v, const Snapshot& s) { return v < s.time; });
    if (ub == list.begin()) return &list.front();
    return &*std::prev(ub);
}

const Snapshot* SnapshotStore::earliest(const std::string& user) const {
    auto it = by_user_.find(user);
    if (it == by_user_.end() || it->second.empty()) return nullptr;
    return &it->second.front();
}

const std::vector<Snapshot>* SnapshotStore::history(const std::string& user) const {
    auto it = by_user_.find(user);
    return it == by_user_.end() ? nullptr : &it->second;
}

std::size_t SnapshotStore::snapshot_count() const {
    std::size_t n = 0;
    for (const auto& [_, list] : by_user_) n += list.size();
    return n;
}

}  // namespace toxconv
