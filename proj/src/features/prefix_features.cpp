#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "blocks.hpp"
#include "toxconv/errors.hpp"
#include "toxconv/stats.hpp"

namespace toxconv::features {

using namespace detail;

namespace {

void content_block(FeatureVector& fv, const ReplyTree& tree) {
    std::vector<double> scores;
    for (const auto& p : tree.posts())
        if (p.toxicity) scores.push_back(*p.toxicity);
    const auto s = stats::summarize(scores);
    fv.add("content.tox_mean", s.mean);
    fv.add("content.tox_std", s.std);
    fv.add("content.tox_min", s.min);
    fv.add("content.tox_max", s.max);
    fv.add("content.tox_q25", s.q25);
    fv.add("content.tox_q50", s.q50);
    fv.add("content.tox_q75", s.q75);
}

void tree_block(FeatureVector& fv, const ReplyTree& tree, std::size_t k, const FeatureContext& ctx) {
    const auto shape = metrics::tree_shape(tree);
    const std::size_t n = tree.size();
    fv.add("tree.depth", static_cast<double>(shape.depth));
    fv.add("tree.width", static_cast<double>(shape.width));
    fv.add("tree.wiener", shape.wiener);
    for (std::size_t d = 1; d <= k; ++d)
        fv.add("tree.nodes_at_depth_" + std::to_string(d),
               d < shape.nodes_at_depth.size() ? static_cast<double>(shape.nodes_at_depth[d]) : 0.0);
    std::vector<double> per_depth(shape.nodes_at_depth.begin() + 1, shape.nodes_at_depth.end());
    add_dist(fv, "tree.depth_profile", per_depth, kMean | kVar | kHidx | kGini | kEntropy);
    fv.add("tree.depth_size_ratio", static_cast<double>(shape.depth) / static_cast<double>(n));

    std::vector<double> depths, leaf_depths, children;
    for (ReplyTree::Index i = 0; i < n; ++i) {
        depths.push_back(tree.depth(i));
        children.push_back(static_cast<double>(tree.children(i).size()));
        if (tree.children(i).empty()) leaf_depths.push_back(tree.depth(i));
    }
    add_dist(fv, "tree.node_depth", depths, kMean | kVar | kMax | kHidx | kGini | kEntropy);
    add_dist(fv, "tree.leaf_depth", leaf_depths, kMean | kVar | kMax | kHidx | kGini | kEntropy);
    add_dist(fv, "tree.children", children, kMean | kVar | kMax | kHidx | kGini);

    const auto direct = tree.children(0);
    const double replies = static_cast<double>(tree.reply_count());
    fv.add("tree.frac_direct_replies", replies > 0 ? std::optional<double>(direct.size() / replies) : std::nullopt);
    const auto answered = std::count_if(direct.begin(), direct.end(), [&](auto c) { return !tree.children(c).empty(); });
    fv.add("tree.frac_direct_with_reply",
           direct.empty() ? std::nullopt : std::optional<double>(static_cast<double>(answered) / direct.size()));

    // Subtrees hanging off the root.
    std::vector<std::size_t> top(n, 0);
    for (ReplyTree::Index i = 1; i < n; ++i) top[i] = tree.parent(i) == 0 ? i : top[tree.parent(i)];
    std::map<ReplyTree::Index, std::pair<double, double>> sub;  // size, depth below root
    for (ReplyTree::Index i = 1; i < n; ++i) {
        auto& s = sub[static_cast<ReplyTree::Index>(top[i])];
        s.first += 1.0;
        s.second = std::max(s.second, static_cast<double>(tree.depth(i)));
    }
    std::vector<double> sizes;
    std::pair<double, double> biggest{0.0, 0.0};
    for (const auto& [r, s] : sub) {
        sizes.push_back(s.first);
        if (s.first > biggest.first) biggest = s;
    }
    add_dist(fv, "tree.subtree_size", sizes, kGini | kEntropy);
    fv.add("tree.largest_subtree_depth_size_ratio",
           biggest.first > 0 ? std::optional<double>(biggest.second / biggest.first) : std::nullopt);

    // Political mixing along reply edges, post level.
    {
        std::vector<std::string> ids;
        for (const auto& p : tree.posts()) ids.push_back(p.id);
        Digraph posts(ids);
        std::vector<double> values(posts.size(), kMissing);
        for (ReplyTree::Index i = 0; i < n; ++i) {
            const NodeId u = *posts.find(tree.post(i).id);
            if (auto a = alignment_of(ctx, tree.post(i).author)) values[u] = *a;
            if (i > 0) posts.add_edge(u, *posts.find(tree.post(tree.parent(i)).id));
        }
        std::optional<double> r;
        try {
            r = metrics::assortativity_numeric(posts, values, false);
        } catch (const ZeroVariance&) {
        }
        fv.add("tree.alignment_assortativity", r);
    }

    std::map<std::string, double> per_user;
    for (const auto& p : tree.posts()) per_user[p.author] += 1.0;
    std::vector<double> tweets;
    for (const auto& [u, c] : per_user) tweets.push_back(c);
    add_dist(fv, "tree.tweets_per_user", tweets, kMean | kVar | kMax | kHidx | kGini);
}

void embeddedness_block(FeatureVector& fv, const std::vector<std::string>& people, const Digraph& follow,
                        const Digraph& reply, const FeatureContext& ctx, Timestamp at) {
    // people is sorted, so it indexes both graphs directly.
    EmbeddednessSample all, f[3], r[3];
    auto link = [](const Digraph& g, NodeId u, NodeId v) { return int(g.has_edge(u, v)) + int(g.has_edge(v, u)); };
    for (NodeId u = 0; u < people.size(); ++u)
        for (NodeId v = u + 1; v < people.size(); ++v) {
            const auto e = metrics::embeddedness(friends_of(ctx, people[u], at), friends_of(ctx, people[v], at));
            all.add(e);
            f[link(follow, u, v)].add(e);
            r[link(reply, u, v)].add(e);
        }
    static const char* kLinks[] = {"none", "one_way", "two_way"};
    add_embeddedness(fv, "emb.all", all);
    for (int i = 0; i < 3; ++i) add_embeddedness(fv, std::string("emb.follow_") + kLinks[i], f[i]);
    for (int i = 0; i < 3; ++i) add_embeddedness(fv, std::string("emb.reply_") + kLinks[i], r[i]);
}

void political_block(FeatureVector& fv, const std::vector<std::string>& people, const FeatureContext& ctx) {
    std::vector<double> values;
    double left = 0, right = 0;
    for (const auto& u : people)
        if (auto a = alignment_of(ctx, u)) {
            values.push_back(*a);
            (leaning(*a) == Leaning::Left ? left : right) += 1.0;
        }
    const auto s = stats::summarize(values);
    fv.add("pol.n", static_cast<double>(values.size()));
    fv.add("pol.mean", s.mean);
    fv.add("pol.std", s.std);
    fv.add("pol.min", s.min);
    fv.add("pol.max", s.max);
    fv.add("pol.q25", s.q25);
    fv.add("pol.q50", s.q50);
    fv.add("pol.q75", s.q75);
    fv.add("pol.iqr", s.q75 && s.q25 ? std::optional<double>(*s.q75 - *s.q25) : std::nullopt);
    fv.add("pol.n_left", left);
    fv.add("pol.n_right", right);
    const double counts[] = {left, right};
    fv.add("pol.leaning_entropy", stats::entropy(counts));
}

void arrival_block(FeatureVector& fv, const ReplyTree& tree, std::size_t k) {
    // The root author holds id 0; each new replier takes the next id.
    std::map<std::string, std::size_t> ids{{tree.root().author, 0}};
    std::set<std::string> repliers;
    for (std::size_t i = 1; i <= k; ++i) {
        if (i < tree.size()) {
            const auto& a = tree.post(static_cast<ReplyTree::Index>(i)).author;
            auto [it, fresh] = ids.try_emplace(a, ids.size());
            repliers.insert(a);
            fv.add("arrival.temporal_id_" + std::to_string(i), static_cast<double>(it->second));
            fv.add("arrival.unique_users_" + std::to_string(i), static_cast<double>(repliers.size()));
        } else {
            fv.add("arrival.temporal_id_" + std::to_string(i), kMissing);
            fv.add("arrival.unique_users_" + std::to_string(i), kMissing);
        }
    }
}

void rate_block(FeatureVector& fv, const ReplyTree& tree, std::size_t k) {
    const double t0 = static_cast<double>(tree.root().time);
    std::vector<double> gaps;
    for (std::size_t i = 1; i <= k; ++i) {
        if (i >= tree.size()) {
            fv.add("rate.root_to_" + std::to_string(i), kMissing);
            continue;
        }
        const double t = static_cast<double>(tree.post(static_cast<ReplyTree::Index>(i)).time);
        fv.add("rate.root_to_" + std::to_string(i), t - t0);
        gaps.push_back(t - static_cast<double>(tree.post(static_cast<ReplyTree::Index>(i - 1)).time));
    }
    for (std::size_t i = 2; i <= k; ++i)
        fv.add("rate.gap_" + std::to_string(i), i - 1 < gaps.size() ? gaps[i - 1] : kMissing);
    auto mean_of = [](std::span<const double> v) {
        return v.empty() ? std::nullopt : std::optional<double>(stats::mean(v));
    };
    const std::span<const double> all(gaps);
    const std::size_t half = gaps.size() / 2;
    fv.add("rate.mean_gap", mean_of(all));
    fv.add("rate.mean_gap_first_half", mean_of(all.subspan(0, half)));
    fv.add("rate.mean_gap_second_half", mean_of(all.subspan(half)));
}

}  // namespace

FeatureVector prefix_features(const ConversationPrefix& prefix, const FeatureContext& ctx,
                              const FeatureCatalog& catalog) {
    if (catalog.task() != Task::Prefix) throw CatalogMismatch("prefix features need a prefix catalog");
    const ReplyTree& tree = prefix.tree;
    if (tree.reply_count() == 0) throw EmptyPrefix("prefix has no replies");
    const std::size_t k = catalog.k();

    Timestamp at = tree.root().time;
    for (const auto& p : tree.posts()) at = std::max(at, p.time);

    FeatureVector fv;
    const auto people = tree.participants();
    const bool need_graphs = catalog.has("follow_graph") || catalog.has("reply_graph") ||
                             catalog.has("subgraphs") || catalog.has("embeddedness");
    Digraph follow, reply;
    if (need_graphs) {
        if (ctx.snapshots == nullptr &&
            (catalog.has("follow_graph") || catalog.has("subgraphs") || catalog.has("embeddedness")))
            throw MissingSnapshotStore("follow-graph features need snapshots");
        reply = reply_graph_from_tree(tree).graph;
        follow = ctx.snapshots ? follow_graph_project(people, ctx.snapshots, at).graph : Digraph(people);
    }

    for (const auto& set : catalog.sets()) {
        if (set == "content_toxicity") content_block(fv, tree);
        else if (set == "reply_tree") tree_block(fv, tree, k, ctx);
        else if (set == "follow_graph") add_graph_block(fv, "follow", follow, node_attributes(follow, ctx, at), ctx.seed);
        else if (set == "reply_graph") add_graph_block(fv, "reply", reply, node_attributes(reply, ctx, at), ctx.seed);
        else if (set == "subgraphs") {
            add_census_block(fv, "census.follow", follow);
            add_census_block(fv, "census.reply", reply);
            add_census_block(fv, "census.both", intersect(follow, reply));
        } else if (set == "embeddedness") embeddedness_block(fv, people, follow, reply, ctx, at);
        else if (set == "political") political_block(fv, people, ctx);
        else if (set == "arrival") arrival_block(fv, tree, k);
        else if (set == "rate") rate_block(fv, tree, k);
    }
    return fv;
}

}  // namespace toxconv::features
