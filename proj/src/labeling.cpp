#include "toxconv/labeling.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "toxconv/errors.hpp"
#include "toxconv/parallel.hpp"
#include "toxconv/stats.hpp"

namespace toxconv::labeling {

std::vector<std::string> LabeledDataset::feature_names() const {
    return instances.empty() ? std::vector<std::string>{} : instances.front().features.names();
}

namespace {

struct Candidate {
    std::size_t tree = 0;
    double suffix_fraction = 0.0;
    int label = -1;
};

}  // namespace

LabeledDataset prefix_label_dataset(std::span<const ReplyTree> corpus, const features::FeatureCatalog& catalog,
                                    const features::FeatureContext& ctx, std::size_t min_bucket,
                                    std::uint64_t seed, unsigned workers) {
    if (catalog.task() != features::Task::Prefix) throw CatalogMismatch("prefix dataset needs a prefix catalog");
    const std::size_t k = catalog.k();
    LabeledDataset ds;
    ds.task = features::Task::Prefix;
    ds.catalog = catalog.describe();
    ds.seed = seed;
    ds.prefix_size = k;
    ds.min_bucket = min_bucket;

    std::map<BucketKey, std::vector<Candidate>> buckets;
    for (std::size_t t = 0; t < corpus.size(); ++t) {
        const ReplyTree& tree = corpus[t];
        if (tree.clock_skew()) {
            ++ds.dropped_clock_skew;
            continue;
        }
        if (tree.reply_count() < 2 * k) {
            ++ds.dropped_short;
            continue;
        }
        const auto posts = tree.posts();
        if (std::any_of(posts.begin() + 1, posts.end(), [](const Post& p) { return !p.toxicity; })) {
            ++ds.dropped_unscored;
            continue;
        }
        std::size_t prefix_toxic = 0, suffix_toxic = 0;
        for (std::size_t i = 1; i < tree.size(); ++i) {
            const bool tox = is_toxic(*posts[i].toxicity, ctx.threshold);
            (i <= k ? prefix_toxic : suffix_toxic) += tox;
        }
        const double suffix_n = static_cast<double>(tree.reply_count() - k);
        buckets[{k, prefix_toxic}].push_back({t, static_cast<double>(suffix_toxic) / suffix_n, -1});
    }

    std::mt19937_64 rng(seed);
    std::vector<Candidate> chosen;
    for (auto& [key, members] : buckets) {
        BucketStats bs;
        bs.key = key;
        bs.conversations = members.size();
        std::vector<double> fractions;
        for (const auto& m : members) fractions.push_back(m.suffix_fraction);
        bs.median = stats::median(fractions);
        std::vector<Candidate> pos, neg;
        for (auto& m : members) {
            if (m.suffix_fraction > bs.median) {
                m.label = 1;
                pos.push_back(m);
            } else if (m.suffix_fraction < bs.median) {
                m.label = 0;
                neg.push_back(m);
            } else {
                ++bs.ties;
            }
        }
        bs.above = pos.size();
        bs.below = neg.size();
        if (members.size() < min_bucket) {
            ds.dropped_small_bucket += members.size();
            ds.buckets.push_back(bs);
            continue;
        }
        bs.kept = true;
        ds.dropped_ties += bs.ties;
        auto& larger = pos.size() > neg.size() ? pos : neg;
        const std::size_t keep = std::min(pos.size(), neg.size());
        std::shuffle(larger.begin(), larger.end(), rng);
        ds.dropped_balance += larger.size() - keep;
        larger.resize(keep);
        bs.kept_per_class = keep;
        chosen.insert(chosen.end(), pos.begin(), pos.end());
        chosen.insert(chosen.end(), neg.begin(), neg.end());
        ds.buckets.push_back(bs);
    }
    if (chosen.empty()) throw NoQualifyingBuckets("no bucket yields a labelled conversation");
    std::sort(chosen.begin(), chosen.end(), [](const auto& a, const auto& b) { return a.tree < b.tree; });

    ds.instances = parallel_map<Instance>(chosen.size(), workers, [&](std::size_t i) {
        const ReplyTree& tree = corpus[chosen[i].tree];
        const auto pre = prefix(tree, k);
        return Instance{features::prefix_features(pre, ctx, catalog), chosen[i].label, tree.root().id};
    });
    return ds;
}

bool qualifies_for_pair(const ReplyTree& tree, ReplyTree::Index i) {
    if (i == 0) return false;
    const auto p = tree.parent(i);
    if (p == 0) return false;
    const Post& post = tree.post(i);
    if (post.author == tree.post(p).author) return false;
    if (!post.toxicity) return false;
    return *post.toxicity < 0.25 || *post.toxicity > 0.75;
}

LabeledDataset paired_next_reply_dataset(std::span<const ReplyTree> corpus, const features::FeatureCatalog& catalog,
                                         const features::FeatureContext& ctx, std::uint64_t seed, unsigned workers) {
    if (catalog.task() != features::Task::NextReply)
        throw CatalogMismatch("paired dataset needs a next-reply catalog");
    LabeledDataset ds;
    ds.task = features::Task::NextReply;
    ds.catalog = catalog.describe();
    ds.seed = seed;

    struct Pair {
        std::size_t tree;
        ReplyTree::Index toxic, nontoxic;
    };
    std::vector<Pair> pairs;
    std::mt19937_64 rng(seed);
    for (std::size_t t = 0; t < corpus.size(); ++t) {
        const ReplyTree& tree = corpus[t];
        if (tree.clock_skew()) {
            ++ds.dropped_clock_skew;
            continue;
        }
        std::vector<ReplyTree::Index> toxic, nontoxic;
        for (ReplyTree::Index i = 1; i < tree.size(); ++i) {
            if (!qualifies_for_pair(tree, i)) continue;
            (*tree.post(i).toxicity > 0.75 ? toxic : nontoxic).push_back(i);
        }
        if (toxic.empty() || nontoxic.empty()) {
            ++ds.dropped_no_pair;
            continue;
        }
        std::uniform_int_distribution<std::size_t> pick_t(0, toxic.size() - 1), pick_n(0, nontoxic.size() - 1);
        const auto a = toxic[pick_t(rng)];
        const auto b = nontoxic[pick_n(rng)];
        pairs.push_back({t, a, b});
    }
    if (pairs.size() % 2 == 1) {
        pairs.pop_back();
        ++ds.dropped_balance;
    }
    std::vector<std::size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<char> toxic_first(pairs.size(), 0);
    for (std::size_t i = 0; i < order.size() / 2; ++i) toxic_first[order[i]] = 1;

    auto tweet_features = [&](const ReplyTree& tree, ReplyTree::Index i) {
        const auto so_far = prefix(tree, i - 1);
        const Post& p = tree.post(i);
        return features::next_reply_features(so_far.tree, p.author, tree.post(tree.parent(i)).id, p.time, ctx,
                                             catalog);
    };
    ds.instances = parallel_map<Instance>(pairs.size(), workers, [&](std::size_t i) {
        const ReplyTree& tree = corpus[pairs[i].tree];
        const auto first = toxic_first[i] ? pairs[i].toxic : pairs[i].nontoxic;
        const auto second = toxic_first[i] ? pairs[i].nontoxic : pairs[i].toxic;
        return Instance{features::pair_difference(tweet_features(tree, first), tweet_features(tree, second)),
                        toxic_first[i] ? 1 : 0, tree.root().id};
    });
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const ReplyTree& tree = corpus[pairs[i].tree];
        const auto first = toxic_first[i] ? pairs[i].toxic : pairs[i].nontoxic;
        const auto second = toxic_first[i] ? pairs[i].nontoxic : pairs[i].toxic;
        ds.pairs.push_back({tree.root().id, tree.post(first).id, tree.post(second).id, toxic_first[i] != 0});
    }
    return ds;
}

}  // namespace toxconv::labeling
