#include <algorithm>
#include <cmath>
#include <set>

#include "blocks.hpp"
#include "toxconv/errors.hpp"
#include "toxconv/stats.hpp"

namespace toxconv::features {

using namespace detail;

namespace {

using metrics::Centrality;

// Everything the blocks need about one graph, computed once.
struct GraphView {
    const Digraph* g = nullptr;
    std::vector<std::vector<double>> centrality;  // [kind * 2 + undirected]
    std::vector<std::uint32_t> cc;                // component id per node
    std::vector<std::size_t> cc_size;
    std::vector<std::uint32_t> part;
    std::vector<std::size_t> part_size;

    GraphView(const Digraph& graph, std::uint64_t seed) : g(&graph) {
        for (auto kind : metrics::kAllCentralities)
            for (bool directed : {true, false}) centrality.push_back(metrics::centrality(graph, kind, directed));
        const auto comps = metrics::weakly_connected_components(graph);
        cc.assign(graph.size(), 0);
        for (std::uint32_t c = 0; c < comps.size(); ++c) {
            cc_size.push_back(comps[c].size());
            for (NodeId u : comps[c]) cc[u] = c;
        }
        const auto p = metrics::louvain(graph, seed);
        part = p.community;
        part_size.assign(p.community_count, 0);
        for (auto c : part) ++part_size[c];
    }

    const std::vector<double>& scores(std::size_t kind, bool directed) const {
        return centrality[kind * 2 + (directed ? 0 : 1)];
    }
};

std::string centrality_suffix(std::size_t kind, bool directed) {
    return std::string(metrics::centrality_name(metrics::kAllCentralities[kind])) + (directed ? "_dir" : "_undir");
}

struct Conversation {
    const ReplyTree& tree;
    std::vector<std::string> people;   // participants plus the replier, sorted
    std::set<std::string> toxic_users;
    Digraph follow, reply;
    const FeatureContext& ctx;
    Timestamp at;
    double threshold;

    NodeId node(const std::string& u) const { return *follow.find(u); }
    const Snapshot* snap(const std::string& u) const { return ctx.snapshots ? ctx.snapshots->at(u, at) : nullptr; }
};

bool toxic_post(const Post& p, double threshold) { return p.toxicity && is_toxic(*p.toxicity, threshold); }

std::optional<double> ratio(double a, double b) { return b > 0 ? std::optional<double>(a / b) : std::nullopt; }

void state_block(FeatureVector& fv, const Conversation& c, const std::string& user) {
    double replies = 0, toxic = 0, from = 0, toxic_from = 0, to = 0, toxic_to = 0;
    for (ReplyTree::Index i = 1; i < c.tree.size(); ++i) {
        const Post& p = c.tree.post(i);
        const bool t = toxic_post(p, c.threshold);
        replies += 1;
        toxic += t;
        if (p.author == user) {
            from += 1;
            toxic_from += t;
        } else if (c.tree.post(c.tree.parent(i)).author == user) {
            to += 1;
            toxic_to += t;
        }
    }
    fv.add("state.replies", replies);
    fv.add("state.toxic", toxic);
    fv.add("state.frac_toxic", ratio(toxic, replies));
    fv.add("state.from_user", from);
    fv.add("state.toxic_from_user", toxic_from);
    fv.add("state.frac_toxic_from_user", ratio(toxic_from, from));
    fv.add("state.to_user", to);
    fv.add("state.toxic_to_user", toxic_to);
    fv.add("state.frac_toxic_to_user", ratio(toxic_to, to));
}

void dyad_block(FeatureVector& fv, const std::string& base, const Conversation& c, const std::string& user,
                const Post& target_post, const GraphView* fview, const GraphView* rview) {
    const std::string& target = target_post.author;
    fv.add(base + ".target_toxic",
           target_post.toxicity ? std::optional<double>(is_toxic(*target_post.toxicity, c.threshold)) : std::nullopt);

    const Snapshot* us = c.snap(user);
    const Snapshot* ts = c.snap(target);
    const NodeId u = c.node(user), t = c.node(target);
    if (us && ts) {
        const bool ut = c.follow.has_edge(u, t), tu = c.follow.has_edge(t, u);
        fv.add_flag(base + ".edge_mutual", ut && tu);
        fv.add_flag(base + ".edge_user_follows_target", ut && !tu);
        fv.add_flag(base + ".edge_target_follows_user", tu && !ut);
        fv.add_flag(base + ".edge_none", !ut && !tu);
        const auto e = metrics::embeddedness(&us->friends, &ts->friends);
        fv.add(base + ".common_friends", static_cast<double>(e.count));
        fv.add(base + ".common_friends_frac", e.fraction);
        fv.add(base + ".d_friends", static_cast<double>(us->friend_count - ts->friend_count));
        fv.add(base + ".d_followers", static_cast<double>(us->follower_count - ts->follower_count));
    } else {
        for (const char* n : {".edge_mutual", ".edge_user_follows_target", ".edge_target_follows_user", ".edge_none",
                              ".common_friends", ".common_friends_frac", ".d_friends", ".d_followers"})
            fv.add(base + n, kMissing);
    }

    if (fview && rview) {
        for (const auto& [name, view] : {std::pair{"follow", fview}, std::pair{"reply", rview}})
            for (std::size_t k = 0; k < metrics::kAllCentralities.size(); ++k)
                for (bool directed : {true, false}) {
                    const auto& s = view->scores(k, directed);
                    fv.add(base + ".d_" + centrality_suffix(k, directed) + "_" + name, s[u] - s[t]);
                }
        for (const auto& [name, view] : {std::pair{"follow", fview}, std::pair{"reply", rview}}) {
            fv.add_flag(base + ".same_cc_" + name, view->cc[u] == view->cc[t]);
            fv.add_flag(base + ".same_partition_" + name, view->part[u] == view->part[t]);
            fv.add(base + ".d_cc_size_" + name,
                   static_cast<double>(view->cc_size[view->cc[u]]) - static_cast<double>(view->cc_size[view->cc[t]]));
            fv.add(base + ".d_partition_size_" + name, static_cast<double>(view->part_size[view->part[u]]) -
                                                           static_cast<double>(view->part_size[view->part[t]]));
        }
    }

    double ut_n = 0, ut_toxic = 0, tu_n = 0, tu_toxic = 0;
    for (ReplyTree::Index i = 1; i < c.tree.size(); ++i) {
        const Post& p = c.tree.post(i);
        const Post& q = c.tree.post(c.tree.parent(i));
        const bool tox = toxic_post(p, c.threshold);
        if (p.author == user && q.author == target) {
            ut_n += 1;
            ut_toxic += tox;
        } else if (p.author == target && q.author == user) {
            tu_n += 1;
            tu_toxic += tox;
        }
    }
    fv.add(base + ".frac_toxic_between", ratio(ut_toxic + tu_toxic, ut_n + tu_n));
    fv.add(base + ".replies_user_to_target", ut_n);
    fv.add(base + ".toxic_user_to_target", ut_toxic);
    fv.add(base + ".frac_toxic_user_to_target", ratio(ut_toxic, ut_n));
    fv.add(base + ".replies_target_to_user", tu_n);
    fv.add(base + ".toxic_target_to_user", tu_toxic);
    fv.add(base + ".frac_toxic_target_to_user", ratio(tu_toxic, tu_n));

    const auto ua = alignment_of(c.ctx, user), ta = alignment_of(c.ctx, target);
    fv.add(base + ".d_alignment", ua && ta ? std::optional<double>(*ua - *ta) : std::nullopt);
    fv.add(base + ".same_leaning",
           ua && ta ? std::optional<double>(leaning(*ua) == leaning(*ta) ? 1.0 : 0.0) : std::nullopt);
}

void graph_position_block(FeatureVector& fv, const std::string& base, const Conversation& c, const GraphView& view,
                          const std::string& user) {
    const Digraph& g = *view.g;
    const NodeId u = c.node(user);
    for (std::size_t k = 0; k < metrics::kAllCentralities.size(); ++k)
        for (bool directed : {true, false})
            fv.add(base + "." + centrality_suffix(k, directed), view.scores(k, directed)[u]);

    for (bool toxic_group : {true, false}) {
        double members = 0, in = 0, out = 0, two = 0, any = 0;
        for (NodeId v = 0; v < g.size(); ++v) {
            if (v == u || (c.toxic_users.count(g.label(v)) > 0) != toxic_group) continue;
            members += 1;
            const bool uv = g.has_edge(u, v), vu = g.has_edge(v, u);
            out += uv && !vu;
            in += vu && !uv;
            two += uv && vu;
            any += uv || vu;
        }
        const std::string grp = base + (toxic_group ? ".toxic" : ".nontoxic");
        fv.add(grp + "_in", in);
        fv.add(grp + "_out", out);
        fv.add(grp + "_two_way", two);
        fv.add(grp + "_connected", any);
        fv.add(grp + "_frac_in", ratio(in, members));
        fv.add(grp + "_frac_out", ratio(out, members));
        fv.add(grp + "_frac_two_way", ratio(two, members));
        fv.add(grp + "_frac_connected", ratio(any, members));
    }

    const double others = static_cast<double>(g.size() - 1);
    const double same_cc = static_cast<double>(view.cc_size[view.cc[u]] - 1);
    const double same_part = static_cast<double>(view.part_size[view.part[u]] - 1);
    fv.add(base + ".same_cc", same_cc);
    fv.add(base + ".frac_same_cc", ratio(same_cc, others));
    fv.add(base + ".same_partition", same_part);
    fv.add(base + ".frac_same_partition", ratio(same_part, others));

    EmbeddednessSample none, user_to, to_user;
    const auto* fu = friends_of(c.ctx, user, c.at);
    for (NodeId v = 0; v < g.size(); ++v) {
        if (v == u) continue;
        const auto e = metrics::embeddedness(fu, friends_of(c.ctx, g.label(v), c.at));
        const bool uv = g.has_edge(u, v), vu = g.has_edge(v, u);
        if (!uv && !vu) none.add(e);
        if (uv) user_to.add(e);
        if (vu) to_user.add(e);
    }
    add_embeddedness(fv, base + ".emb_unconnected", none);
    add_embeddedness(fv, base + ".emb_user_to_other", user_to);
    add_embeddedness(fv, base + ".emb_other_to_user", to_user);
}

void position_block(FeatureVector& fv, const ReplyTree& tree, ReplyTree::Index parent) {
    fv.add("tree.depth", static_cast<double>(tree.depth(parent) + 1));
    fv.add("tree.siblings", static_cast<double>(tree.children(parent).size()));
    double size = 0, depth = 0;
    if (parent != 0) {
        ReplyTree::Index top = parent;
        while (tree.parent(top) != 0) top = tree.parent(top);
        std::vector<ReplyTree::Index> stack{top};
        while (!stack.empty()) {
            const auto i = stack.back();
            stack.pop_back();
            size += 1;
            depth = std::max(depth, static_cast<double>(tree.depth(i)));
            for (auto ch : tree.children(i)) stack.push_back(ch);
        }
    }
    fv.add("tree.subtree_size", size);
    fv.add("tree.subtree_frac", size / static_cast<double>(tree.size()));
    fv.add("tree.subtree_size_depth_ratio", ratio(size, depth));
}

void embeddedness_sets(FeatureVector& fv, const Conversation& c, const std::string& user, bool overall, bool toxic) {
    const auto* fu = friends_of(c.ctx, user, c.at);
    EmbeddednessSample all, with_toxic, with_nontoxic;
    for (const auto& v : c.people) {
        if (v == user) continue;
        const auto e = metrics::embeddedness(fu, friends_of(c.ctx, v, c.at));
        all.add(e);
        (c.toxic_users.count(v) ? with_toxic : with_nontoxic).add(e);
    }
    if (overall) add_embeddedness(fv, "oemb", all);
    if (toxic) {
        add_embeddedness(fv, "temb.toxic", with_toxic);
        add_embeddedness(fv, "temb.nontoxic", with_nontoxic);
    }
}

void political_block(FeatureVector& fv, const Conversation& c, const std::string& user) {
    const auto ua = alignment_of(c.ctx, user);
    double diff = 0, same = 0, n = 0;
    if (ua)
        for (const auto& v : c.people) {
            if (v == user) continue;
            if (auto va = alignment_of(c.ctx, v)) {
                diff += std::abs(*ua - *va);
                same += leaning(*ua) == leaning(*va);
                n += 1;
            }
        }
    fv.add("pol.mean_abs_delta", ratio(diff, n));
    fv.add("pol.frac_same_leaning", ratio(same, n));
}

void user_block(FeatureVector& fv, const Conversation& c, const std::string& user) {
    const Snapshot* s = c.snap(user);
    fv.add("user.friends", s ? std::optional<double>(static_cast<double>(s->friend_count)) : std::nullopt);
    fv.add("user.followers", s ? std::optional<double>(static_cast<double>(s->follower_count)) : std::nullopt);
    fv.add("user.friend_follower_ratio",
           s ? ratio(static_cast<double>(s->friend_count), static_cast<double>(s->follower_count)) : std::nullopt);
}

}  // namespace

FeatureVector next_reply_features(const ReplyTree& so_far, const std::string& user, std::string_view parent_id,
                                  Timestamp at, const FeatureContext& ctx, const FeatureCatalog& catalog) {
    if (catalog.task() != Task::NextReply) throw CatalogMismatch("next-reply features need a next-reply catalog");
    const auto parent = so_far.find(parent_id);
    if (!parent) throw UnknownParent("parent " + std::string(parent_id) + " is not in the conversation so far");

    auto people = so_far.participants();
    if (!std::binary_search(people.begin(), people.end(), user)) {
        people.insert(std::upper_bound(people.begin(), people.end(), user), user);
    }
    const bool need_follow = catalog.has("user_parent") || catalog.has("follow_graph") ||
                             catalog.has("user_root") || catalog.has("overall_embeddedness") ||
                             catalog.has("toxic_embeddedness") || catalog.has("user_info");
    if (need_follow && ctx.snapshots == nullptr) throw MissingSnapshotStore("next-reply features need snapshots");

    Conversation c{so_far, people, {}, Digraph(people), Digraph(people), ctx, at, ctx.threshold};
    if (ctx.snapshots) c.follow = follow_graph_project(people, ctx.snapshots, at).graph;
    for (ReplyTree::Index i = 0; i < so_far.size(); ++i) {
        const Post& p = so_far.post(i);
        if (toxic_post(p, ctx.threshold)) c.toxic_users.insert(p.author);
        if (i == 0) continue;
        const Post& q = so_far.post(so_far.parent(i));
        if (p.author != q.author) c.reply.add_edge(c.node(p.author), c.node(q.author));
    }

    std::optional<GraphView> fview, rview;
    if (catalog.has("user_parent") || catalog.has("follow_graph")) fview.emplace(c.follow, ctx.seed);
    if (catalog.has("user_parent") || catalog.has("reply_graph")) rview.emplace(c.reply, ctx.seed);

    FeatureVector fv;
    for (const auto& set : catalog.sets()) {
        if (set == "conversation_state") state_block(fv, c, user);
        else if (set == "user_parent") dyad_block(fv, "up", c, user, so_far.post(*parent), &*fview, &*rview);
        else if (set == "user_root") dyad_block(fv, "ur", c, user, so_far.root(), nullptr, nullptr);
        else if (set == "follow_graph") graph_position_block(fv, "fg", c, *fview, user);
        else if (set == "reply_graph") graph_position_block(fv, "rg", c, *rview, user);
        else if (set == "reply_tree") position_block(fv, so_far, *parent);
        else if (set == "overall_embeddedness") embeddedness_sets(fv, c, user, true, false);
        else if (set == "toxic_embeddedness") embeddedness_sets(fv, c, user, false, true);
        else if (set == "political") political_block(fv, c, user);
        else if (set == "user_info") user_block(fv, c, user);
    }
    return fv;
}

}  // namespace toxconv::features
