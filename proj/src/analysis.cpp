#include "toxconv/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "toxconv/errors.hpp"
#include "toxconv/graph_metrics.hpp"
#include "toxconv/parallel.hpp"

namespace toxconv::analysis {

namespace {

struct UserTally {
    std::size_t tweets = 0;
    std::size_t scored = 0;
    std::size_t toxic = 0;
};

std::map<std::string, UserTally> tally_users(std::span<const ReplyTree> corpus, double threshold) {
    std::map<std::string, UserTally> users;
    for (const auto& tree : corpus)
        for (const auto& p : tree.posts()) {
            auto& u = users[p.author];
            ++u.tweets;
            if (p.toxicity) {
                ++u.scored;
                u.toxic += is_toxic(*p.toxicity, threshold);
            }
        }
    return users;
}

// Accumulates values per integer bucket and turns them into points.
struct Accumulator {
    std::map<int, std::vector<double>> ys;
    std::map<int, std::vector<double>> xs;

    void add(int bucket, double x, double y) {
        ys[bucket].push_back(y);
        xs[bucket].push_back(x);
    }

    template <typename Label>
    std::vector<BucketPoint> mean_points(Label&& label) const {
        std::vector<BucketPoint> out;
        for (const auto& [b, v] : ys) {
            BucketPoint p;
            p.bucket = label(b);
            p.x = stats::mean(xs.at(b));
            p.y = stats::mean(v);
            p.ci = stats::mean_ci(v);
            p.n = v.size();
            out.push_back(std::move(p));
        }
        return out;
    }
};

BucketPoint count_point(std::string bucket, double x, std::size_t n) {
    BucketPoint p;
    p.bucket = std::move(bucket);
    p.x = x;
    p.y = static_cast<double>(n);
    p.ci = {p.y, p.y};
    p.n = n;
    return p;
}

std::string fixed(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

Timestamp last_post_time(const ReplyTree& tree) {
    Timestamp t = tree.root().time;
    for (const auto& p : tree.posts()) t = std::max(t, p.time);
    return t;
}

}  // namespace

UserDistributions user_distributions(std::span<const ReplyTree> corpus, double threshold) {
    const stats::LogBucketer lb(2.0);
    std::map<int, std::size_t> tweets, toxic;
    for (const auto& [user, t] : tally_users(corpus, threshold)) {
        ++tweets[lb.bucket(static_cast<double>(t.tweets))];
        ++toxic[lb.bucket(static_cast<double>(t.toxic))];
    }
    UserDistributions d;
    d.tweets.name = "users_by_tweets";
    d.toxic_tweets.name = "users_by_toxic_tweets";
    for (auto [b, n] : tweets) d.tweets.points.push_back(count_point(lb.label(b), lb.lower_edge(b), n));
    for (auto [b, n] : toxic) d.toxic_tweets.points.push_back(count_point(lb.label(b), lb.lower_edge(b), n));
    return d;
}

BucketSeries toxicity_contribution(std::span<const ReplyTree> corpus, double threshold) {
    const stats::LogBucketer lb(2.0);
    std::map<int, std::pair<std::size_t, std::size_t>> by_bucket;  // toxic tweets, users
    std::size_t total = 0;
    for (const auto& [user, t] : tally_users(corpus, threshold)) {
        if (t.toxic == 0) continue;
        auto& slot = by_bucket[lb.bucket(static_cast<double>(t.toxic))];
        slot.first += t.toxic;
        ++slot.second;
        total += t.toxic;
    }
    if (total == 0) throw NoToxicTweets("corpus contains no toxic tweets");
    BucketSeries s{"toxicity_contribution", {}};
    for (const auto& [b, v] : by_bucket) {
        BucketPoint p;
        p.bucket = lb.label(b);
        p.x = lb.lower_edge(b);
        p.y = static_cast<double>(v.first) / static_cast<double>(total);
        p.ci = stats::proportion_ci(v.first, total);
        p.n = v.second;
        s.points.push_back(std::move(p));
    }
    return s;
}

BucketSeries toxicity_rate_by_activity(std::span<const ReplyTree> corpus, double threshold) {
    const stats::LogBucketer lb(2.0);
    Accumulator acc;
    for (const auto& [user, t] : tally_users(corpus, threshold)) {
        if (t.scored == 0) continue;
        const auto scored = static_cast<double>(t.scored);
        acc.add(lb.bucket(scored), scored, static_cast<double>(t.toxic) / scored);
    }
    return {"toxicity_rate_by_activity", acc.mean_points([&](int b) { return lb.label(b); })};
}

double homophily(std::span<const ReplyTree> corpus, const SnapshotStore& snapshots, HomophilyMode mode,
                 double threshold) {
    const auto users = tally_users(corpus, threshold);
    std::vector<std::string> ids;
    for (const auto& [u, t] : users) ids.push_back(u);
    const FollowGraph fg = follow_graph_project(ids, &snapshots, std::numeric_limits<Timestamp>::min());
    // ids is sorted, so node i is ids[i].
    if (mode == HomophilyMode::Numeric) {
        std::vector<double> values;
        for (const auto& [u, t] : users) values.push_back(static_cast<double>(t.toxic));
        return metrics::assortativity_numeric(fg.graph, values, true);
    }
    const std::size_t cut = mode == HomophilyMode::AtLeastOneToxic ? 1 : 4;
    std::vector<int> labels;
    for (const auto& [u, t] : users) labels.push_back(t.toxic >= cut ? 1 : 0);
    return metrics::assortativity_categorical(fg.graph, labels, true);
}

std::string_view edge_type_name(EdgeType t) {
    switch (t) {
        case EdgeType::Mutual: return "mutual";
        case EdgeType::ChildFollowsParent: return "child_follows_parent";
        case EdgeType::ParentFollowsChild: return "parent_follows_child";
        case EdgeType::None: return "none";
    }
    return "none";
}

double influence_gap(std::int64_t parent_followers, std::int64_t child_followers) {
    return std::log10(static_cast<double>(parent_followers) + 1.0) -
           std::log10(static_cast<double>(child_followers) + 1.0);
}

std::vector<DyadRecord> extract_dyads(const ReplyTree& tree, const SnapshotStore* snapshots, Timestamp at,
                                      double threshold) {
    std::vector<DyadRecord> out;
    for (ReplyTree::Index i = 1; i < tree.size(); ++i) {
        const ReplyTree::Index pi = tree.parent(i);
        if (pi == 0) continue;
        const Post& child = tree.post(i);
        const Post& parent = tree.post(pi);
        if (child.author == parent.author) continue;
        if (!child.toxicity || !parent.toxicity) continue;

        DyadRecord d;
        d.parent_user = parent.author;
        d.child_user = child.author;
        d.parent_post = parent.id;
        d.child_post = child.id;
        d.parent_toxic = is_toxic(*parent.toxicity, threshold);
        d.child_toxic = is_toxic(*child.toxicity, threshold);

        const Snapshot* ps = snapshots ? snapshots->at(parent.author, at) : nullptr;
        const Snapshot* cs = snapshots ? snapshots->at(child.author, at) : nullptr;
        d.follow_missing = ps == nullptr || cs == nullptr;
        auto follows = [](const Snapshot* s, const std::string& who) {
            return s != nullptr && std::binary_search(s->friends.begin(), s->friends.end(), who);
        };
        const bool c2p = follows(cs, parent.author);
        const bool p2c = follows(ps, child.author);
        d.edge_type = c2p && p2c ? EdgeType::Mutual
                      : c2p      ? EdgeType::ChildFollowsParent
                      : p2c      ? EdgeType::ParentFollowsChild
                                 : EdgeType::None;
        if (ps && cs) {
            d.influence_gap = influence_gap(ps->follower_count, cs->follower_count);
            d.embeddedness = metrics::embeddedness(&ps->friends, &cs->friends).count;
        }
        out.push_back(std::move(d));
    }
    return out;
}

std::vector<DyadRecord> extract_all_dyads(std::span<const ReplyTree> corpus, const SnapshotStore* snapshots,
                                          double threshold, unsigned workers) {
    auto per_tree = parallel_map<std::vector<DyadRecord>>(corpus.size(), workers, [&](std::size_t i) {
        return extract_dyads(corpus[i], snapshots, last_post_time(corpus[i]), threshold);
    });
    std::vector<DyadRecord> all;
    for (auto& v : per_tree) std::move(v.begin(), v.end(), std::back_inserter(all));
    return all;
}

namespace {

int gap_bin_index(double gap) {
    const double g = std::clamp(gap, -4.0, 4.0);
    return std::min(15, static_cast<int>(std::floor((g + 4.0) / 0.5)));
}

}  // namespace

std::string influence_gap_bin(double gap) {
    const int b = gap_bin_index(gap);
    return "[" + fixed(-4.0 + 0.5 * b, 1) + "," + fixed(-3.5 + 0.5 * b, 1) + ")";
}

double influence_gap_bin_center(double gap) { return -3.75 + 0.5 * gap_bin_index(gap); }

BucketSeries toxic_reply_probability(std::span<const DyadRecord> dyads, DyadCondition condition,
                                     bool given_parent_toxic) {
    const stats::LogBucketer lb(2.0);
    // Bin key -> (label, x, toxic children, dyads).
    struct Bin {
        std::string label;
        double x = 0.0;
        std::size_t toxic = 0, total = 0;
    };
    std::map<int, Bin> bins;
    for (const auto& d : dyads) {
        if (d.parent_toxic != given_parent_toxic) continue;
        int key = 0;
        Bin proto;
        switch (condition) {
            case DyadCondition::EdgeType:
                key = static_cast<int>(d.edge_type);
                proto.label = std::string(edge_type_name(d.edge_type));
                proto.x = key;
                break;
            case DyadCondition::InfluenceGap:
                if (!d.influence_gap) continue;
                key = gap_bin_index(*d.influence_gap);
                proto.label = influence_gap_bin(*d.influence_gap);
                proto.x = influence_gap_bin_center(*d.influence_gap);
                break;
            case DyadCondition::Embeddedness:
                if (!d.embeddedness) continue;
                key = lb.bucket(static_cast<double>(*d.embeddedness));
                proto.label = lb.label(key);
                proto.x = lb.lower_edge(key);
                break;
        }
        auto [it, fresh] = bins.try_emplace(key, proto);
        it->second.toxic += d.child_toxic;
        ++it->second.total;
    }
    const char* cond = condition == DyadCondition::EdgeType       ? "edge_type"
                       : condition == DyadCondition::InfluenceGap ? "influence_gap"
                                                                  : "embeddedness";
    BucketSeries s{std::string(cond) + (given_parent_toxic ? "|toxic_parent" : "|nontoxic_parent"), {}};
    for (const auto& [key, b] : bins) {
        BucketPoint p;
        p.bucket = b.label;
        p.x = b.x;
        p.y = static_cast<double>(b.toxic) / static_cast<double>(b.total);
        p.ci = stats::proportion_ci(b.toxic, b.total);
        p.n = b.total;
        s.points.push_back(std::move(p));
    }
    return s;
}

std::optional<double> conversation_toxicity(const ReplyTree& tree, double threshold) {
    std::size_t scored = 0, toxic = 0;
    for (const auto& p : tree.posts())
        if (p.toxicity) {
            ++scored;
            toxic += is_toxic(*p.toxicity, threshold);
        }
    if (scored == 0) return std::nullopt;
    return static_cast<double>(toxic) / static_cast<double>(scored);
}

namespace {

std::optional<double> tree_measure(const ReplyTree& tree, TreeMeasure x) {
    const auto shape = metrics::tree_shape(tree);
    switch (x) {
        case TreeMeasure::Size: return static_cast<double>(shape.size);
        case TreeMeasure::Depth: return static_cast<double>(shape.depth);
        case TreeMeasure::Width: return static_cast<double>(shape.width);
        case TreeMeasure::Wiener: return shape.wiener;
    }
    return std::nullopt;
}

const char* tree_measure_name(TreeMeasure x) {
    switch (x) {
        case TreeMeasure::Size: return "size";
        case TreeMeasure::Depth: return "depth";
        case TreeMeasure::Width: return "width";
        case TreeMeasure::Wiener: return "wiener";
    }
    return "";
}

}  // namespace

BucketSeries tree_toxicity_curve(std::span<const ReplyTree> corpus, TreeMeasure x, double threshold) {
    const stats::LogBucketer lb(2.0);
    Accumulator acc;
    for (const auto& tree : corpus) {
        const auto tox = conversation_toxicity(tree, threshold);
        const auto v = tree_measure(tree, x);
        if (!tox || !v) continue;
        acc.add(lb.bucket(*v), *v, *tox);
    }
    return {std::string("toxicity_by_") + tree_measure_name(x), acc.mean_points([&](int b) { return lb.label(b); })};
}

std::vector<BucketSeries> wiener_by_size(std::span<const ReplyTree> corpus, double threshold) {
    constexpr int kGroups = 5;
    std::size_t lo = std::numeric_limits<std::size_t>::max(), hi = 0;
    for (const auto& t : corpus)
        if (t.size() >= 2) {
            lo = std::min(lo, t.size());
            hi = std::max(hi, t.size());
        }
    if (hi == 0) return {};
    const double span = std::log(static_cast<double>(hi) / static_cast<double>(lo));
    auto group_of = [&](std::size_t size) {
        if (span <= 0.0) return 0;
        const double r = std::log(static_cast<double>(size) / static_cast<double>(lo)) / span;
        return std::min(kGroups - 1, static_cast<int>(std::floor(r * kGroups)));
    };
    auto group_edge = [&](int g) {
        return static_cast<double>(lo) * std::exp(span * static_cast<double>(g) / kGroups);
    };
    std::vector<std::vector<ReplyTree>> groups(kGroups);
    for (const auto& t : corpus)
        if (t.size() >= 2) groups[group_of(t.size())].push_back(t);
    std::vector<BucketSeries> out;
    for (int g = 0; g < kGroups; ++g) {
        if (groups[g].empty()) continue;
        auto s = tree_toxicity_curve(groups[g], TreeMeasure::Wiener, threshold);
        s.name = "wiener|size_" + fixed(group_edge(g), 1) + "-" + fixed(group_edge(g + 1), 1);
        out.push_back(std::move(s));
    }
    return out;
}

BucketSeries follow_graph_toxicity_curve(std::span<const ReplyTree> corpus, const SnapshotStore& snapshots,
                                         FollowMeasure x, double threshold, unsigned workers,
                                         std::uint64_t seed) {
    struct Obs {
        bool ok = false;
        double x = 0.0, y = 0.0;
    };
    auto obs = parallel_map<Obs>(corpus.size(), workers, [&](std::size_t i) {
        Obs o;
        const auto& tree = corpus[i];
        const auto tox = conversation_toxicity(tree, threshold);
        const auto people = tree.participants();
        if (!tox || people.size() < 2) return o;
        const FollowGraph fg = follow_graph_project(people, &snapshots, last_post_time(tree));
        switch (x) {
            case FollowMeasure::Density: o.x = metrics::density(fg.graph, true); break;
            case FollowMeasure::Components:
                o.x = static_cast<double>(metrics::weakly_connected_components(fg.graph).size());
                break;
            case FollowMeasure::Modularity: o.x = metrics::louvain(fg.graph, seed).modularity; break;
        }
        o.y = *tox;
        o.ok = true;
        return o;
    });

    Accumulator acc;
    const stats::LogBucketer lb(2.0);
    for (const auto& o : obs) {
        if (!o.ok) continue;
        int b = 0;
        switch (x) {
            case FollowMeasure::Density: b = std::min(9, static_cast<int>(std::floor(o.x * 10.0))); break;
            case FollowMeasure::Components: b = lb.bucket(o.x); break;
            case FollowMeasure::Modularity:
                b = std::clamp(static_cast<int>(std::floor((o.x + 0.5) * 10.0 + 1e-9)), 0, 14);
                break;
        }
        acc.add(b, o.x, o.y);
    }
    const char* name = x == FollowMeasure::Density      ? "toxicity_by_follow_density"
                       : x == FollowMeasure::Components ? "toxicity_by_follow_components"
                                                        : "toxicity_by_follow_modularity";
    auto label = [&](int b) -> std::string {
        switch (x) {
            case FollowMeasure::Density: return "[" + fixed(b / 10.0, 1) + "," + fixed((b + 1) / 10.0, 1) + ")";
            case FollowMeasure::Components: return lb.label(b);
            case FollowMeasure::Modularity:
                return "[" + fixed(-0.5 + b / 10.0, 1) + "," + fixed(-0.4 + b / 10.0, 1) + ")";
        }
        return "";
    };
    return {name, acc.mean_points(label)};
}

TimeToSize time_to_size(std::span<const ReplyTree> corpus, std::size_t n) {
    if (n == 0) throw InvalidArgument("time_to_size needs n >= 1");
    TimeToSize r;
    r.n = n;
    for (const auto& tree : corpus) {
        if (tree.reply_count() < n) continue;
        // Index order is arrival order, so reply n sits at index n.
        r.seconds.push_back(static_cast<double>(tree.post(static_cast<ReplyTree::Index>(n)).time - tree.root().time));
    }
    r.conversations = r.seconds.size();
    if (!r.seconds.empty()) {
        r.median = stats::median(r.seconds);
        r.q25 = stats::quantile(r.seconds, 0.25);
        r.q75 = stats::quantile(r.seconds, 0.75);
    }
    return r;
}

}  // namespace toxconv::analysis
