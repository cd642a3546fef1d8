#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "toxconv/core_model.hpp"
#include "toxconv/snapshots.hpp"
#include "toxconv/stats.hpp"
#include "toxconv/toxicity.hpp"

namespace toxconv::analysis {

struct BucketPoint {
    std::string bucket;
    double x = 0.0;       // representative value of the bucket
    double y = 0.0;
    stats::Interval ci;
    std::size_t n = 0;
};

struct BucketSeries {
    std::string name;
    std::vector<BucketPoint> points;
};

// Posts with a missing score count as activity but are left out of every
// toxicity statistic.
struct UserDistributions {
    BucketSeries tweets;        // users per log2 bucket of tweet count
    BucketSeries toxic_tweets;  // users per log2 bucket of toxic tweet count
};

UserDistributions user_distributions(std::span<const ReplyTree> corpus,
                                     double threshold = kDefaultToxicityThreshold);

// Share of all toxic tweets contributed by users in each toxic-count bucket.
// Throws NoToxicTweets when the corpus has none.
BucketSeries toxicity_contribution(std::span<const ReplyTree> corpus,
                                   double threshold = kDefaultToxicityThreshold);

// Mean per-user toxic fraction per bucket of scored-tweet count.
BucketSeries toxicity_rate_by_activity(std::span<const ReplyTree> corpus,
                                       double threshold = kDefaultToxicityThreshold);

enum class HomophilyMode { AtLeastOneToxic, AtLeastFourToxic, Numeric };

// Assortativity of user toxicity over the follow graph among all corpus users,
// built from each user's earliest snapshot.
double homophily(std::span<const ReplyTree> corpus, const SnapshotStore& snapshots, HomophilyMode mode,
                 double threshold = kDefaultToxicityThreshold);

enum class EdgeType { Mutual, ChildFollowsParent, ParentFollowsChild, None };
std::string_view edge_type_name(EdgeType t);

struct DyadRecord {
    std::string parent_user, child_user;
    std::string parent_post, child_post;
    bool parent_toxic = false;
    bool child_toxic = false;
    EdgeType edge_type = EdgeType::None;
    std::optional<double> influence_gap;   // absent when a follower count is unknown
    std::optional<std::size_t> embeddedness;
    bool follow_missing = false;           // some snapshot was unavailable
};

// log10(parent + 1) - log10(child + 1).
double influence_gap(std::int64_t parent_followers, std::int64_t child_followers);

// One record per reply edge that is neither a self-reply nor a direct reply
// to the root and whose two posts are scored. Follow data comes from the
// snapshots in effect at `at`; pass nullptr to mark everything missing.
std::vector<DyadRecord> extract_dyads(const ReplyTree& tree, const SnapshotStore* snapshots, Timestamp at,
                                      double threshold = kDefaultToxicityThreshold);

// Dyads for every conversation, follow data taken at each conversation's
// last post. Order follows the corpus.
std::vector<DyadRecord> extract_all_dyads(std::span<const ReplyTree> corpus, const SnapshotStore* snapshots,
                                          double threshold = kDefaultToxicityThreshold, unsigned workers = 1);

enum class DyadCondition { EdgeType, InfluenceGap, Embeddedness };

// Bin labels for the dyad conditions.
std::string influence_gap_bin(double gap);   // width 0.5 over [-4, 4], clamped
double influence_gap_bin_center(double gap);

// P(child toxic | condition bin, parent toxicity) with Wilson intervals.
// Empty bins are omitted; dyads without the conditioning value are skipped.
BucketSeries toxic_reply_probability(std::span<const DyadRecord> dyads, DyadCondition condition,
                                     bool given_parent_toxic);

enum class TreeMeasure { Size, Depth, Width, Wiener };

// Fraction of toxic posts (root included, scored posts only).
std::optional<double> conversation_toxicity(const ReplyTree& tree, double threshold = kDefaultToxicityThreshold);

// Mean conversation toxicity per log2 bucket of the measure.
BucketSeries tree_toxicity_curve(std::span<const ReplyTree> corpus, TreeMeasure x,
                                 double threshold = kDefaultToxicityThreshold);

// Wiener curves split into five geometric size groups; one series per group.
std::vector<BucketSeries> wiener_by_size(std::span<const ReplyTree> corpus,
                                         double threshold = kDefaultToxicityThreshold);

enum class FollowMeasure { Density, Components, Modularity };

// Follow graph over each conversation's participants at its last post.
BucketSeries follow_graph_toxicity_curve(std::span<const ReplyTree> corpus, const SnapshotStore& snapshots,
                                         FollowMeasure x, double threshold = kDefaultToxicityThreshold,
                                         unsigned workers = 1, std::uint64_t seed = 0);

struct TimeToSize {
    std::size_t n = 0;                 // reply index reached
    std::size_t conversations = 0;
    std::optional<double> median, q25, q75;
    std::vector<double> seconds;       // per qualifying conversation, corpus order
};

TimeToSize time_to_size(std::span<const ReplyTree> corpus, std::size_t n);

}  // namespace toxconv::analysis
