#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "toxconv/core_model.hpp"
#include "toxconv/features.hpp"

namespace toxconv::labeling {

struct BucketKey {
    std::size_t prefix_size = 0;
    std::size_t prefix_toxic_count = 0;
    friend auto operator<=>(const BucketKey&, const BucketKey&) = default;
};

struct BucketStats {
    BucketKey key;
    std::size_t conversations = 0;   // eligible conversations in the bucket
    double median = 0.0;             // median suffix toxic fraction
    std::size_t above = 0, below = 0, ties = 0;
    std::size_t kept_per_class = 0;  // after downsampling the larger side
    bool kept = false;               // false when under min_bucket
};

struct Instance {
    features::FeatureVector features;
    int label = 0;
    std::string group;   // conversation (root post) id
};

struct PairRecord {
    std::string group;
    std::string first_post, second_post;
    bool first_toxic = false;
};

struct LabeledDataset {
    features::Task task = features::Task::Prefix;
    std::string catalog;             // FeatureCatalog::describe()
    std::uint64_t seed = 0;
    std::size_t prefix_size = 0;
    std::size_t min_bucket = 0;
    std::vector<Instance> instances;
    std::vector<BucketStats> buckets;
    std::vector<PairRecord> pairs;

    // Conversations not used, by reason.
    std::size_t dropped_clock_skew = 0;
    std::size_t dropped_unscored = 0;
    std::size_t dropped_short = 0;
    std::size_t dropped_small_bucket = 0;
    std::size_t dropped_ties = 0;
    std::size_t dropped_balance = 0;
    std::size_t dropped_no_pair = 0;

    std::vector<std::string> feature_names() const;
};

// Prefix task. Conversations with fewer than 2k replies, a reply predating
// its parent, or an unscored reply are skipped. Buckets are keyed by the
// toxic count among the k prefix replies; within each bucket of at least
// `min_bucket` conversations, label 1 / 0 means suffix toxic fraction above /
// below the bucket median, exact ties are dropped, and the larger class is
// downsampled (seeded) to the smaller so every bucket is exactly balanced.
// Throws NoQualifyingBuckets when no instance survives.
LabeledDataset prefix_label_dataset(std::span<const ReplyTree> corpus, const features::FeatureCatalog& catalog,
                                    const features::FeatureContext& ctx, std::size_t min_bucket = 200,
                                    std::uint64_t seed = 0, unsigned workers = 1);

// Reply eligible for the paired task: not a self-reply, not a direct reply to
// the root, scored below 0.25 or above 0.75.
bool qualifies_for_pair(const ReplyTree& tree, ReplyTree::Index i);

// Paired next-reply task: at most one (toxic, nontoxic) pair per conversation,
// each tweet described by its next-reply features on the posts strictly
// before it, instance = first - second. Exactly half of the pairs put the
// toxic tweet first; with an odd number of candidate pairs the last one is
// dropped to keep that exact.
LabeledDataset paired_next_reply_dataset(std::span<const ReplyTree> corpus, const features::FeatureCatalog& catalog,
                                         const features::FeatureContext& ctx, std::uint64_t seed = 0,
                                         unsigned workers = 1);

}  // namespace toxconv::labeling
