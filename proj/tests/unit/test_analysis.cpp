#include <cmath>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "toxconv/analysis.hpp"
#include "toxconv/errors.hpp"

using namespace toxconv;
using namespace toxconv::analysis;
using fixture::Node;

namespace {

constexpr double T = 0.9, N = 0.1;

// A conversation in which `author` posts the root and `tox` replies.
ReplyTree authored(const std::string& author, std::vector<double> tox, Timestamp t0 = 0) {
    std::vector<Node> s{{author, -1, t0, tox.empty() ? std::nullopt : std::optional<double>(tox[0])}};
    for (std::size_t i = 1; i < tox.size(); ++i) s.push_back({author, 0, t0 + static_cast<Timestamp>(i), tox[i]});
    return fixture::tree(s);
}

const BucketPoint* find_x(const BucketSeries& s, double x) {
    for (const auto& p : s.points)
        if (p.x == x) return &p;
    return nullptr;
}

}  // namespace

TEST(UserDistributions, OneUserOneTweet) {
    std::vector<ReplyTree> c{authored("A", {N})};
    auto d = user_distributions(c);
    ASSERT_EQ(d.tweets.points.size(), 1u);
    EXPECT_DOUBLE_EQ(d.tweets.points[0].x, 1.0);
    EXPECT_EQ(d.tweets.points[0].n, 1u);
}

TEST(UserDistributions, LogBuckets) {
    std::vector<ReplyTree> c{authored("A", {N}), authored("B", {N, N}), authored("C", {N, N, N, N})};
    auto d = user_distributions(c);
    ASSERT_EQ(d.tweets.points.size(), 3u);
    for (double x : {1.0, 2.0, 4.0}) {
        auto* p = find_x(d.tweets, x);
        ASSERT_TRUE(p) << x;
        EXPECT_EQ(p->n, 1u);
    }
    // No toxic tweets: only the zero bucket.
    ASSERT_EQ(d.toxic_tweets.points.size(), 1u);
    EXPECT_DOUBLE_EQ(d.toxic_tweets.points[0].x, 0.0);
    EXPECT_EQ(d.toxic_tweets.points[0].n, 3u);
}

TEST(ToxicityContribution, Examples) {
    std::vector<ReplyTree> single{authored("A", {T, N})};
    auto s = toxicity_contribution(single);
    ASSERT_EQ(s.points.size(), 1u);
    EXPECT_DOUBLE_EQ(s.points[0].y, 1.0);

    std::vector<ReplyTree> two{authored("A", {T}), authored("B", {T, T, T})};
    auto t = toxicity_contribution(two);
    ASSERT_EQ(t.points.size(), 2u);
    EXPECT_DOUBLE_EQ(find_x(t, 1.0)->y, 0.25);
    EXPECT_DOUBLE_EQ(find_x(t, 2.0)->y, 0.75);

    std::vector<ReplyTree> none;
    EXPECT_THROW(toxicity_contribution(none), NoToxicTweets);
    std::vector<ReplyTree> clean{authored("A", {N, N})};
    EXPECT_THROW(toxicity_contribution(clean), NoToxicTweets);
}

TEST(ToxicityRate, Examples) {
    std::vector<ReplyTree> one{authored("A", {T, T, N, N})};
    EXPECT_DOUBLE_EQ(toxicity_rate_by_activity(one).points.at(0).y, 0.5);

    std::vector<ReplyTree> zero{authored("A", {N}), authored("B", {N, N})};
    for (const auto& p : toxicity_rate_by_activity(zero).points) EXPECT_DOUBLE_EQ(p.y, 0.0);

    std::vector<ReplyTree> mixed{authored("A", {N, N}), authored("B", {T, T})};
    auto m = toxicity_rate_by_activity(mixed);
    ASSERT_EQ(m.points.size(), 1u);
    EXPECT_DOUBLE_EQ(m.points[0].y, 0.5);
}

TEST(ToxicityRate, UnscoredPostsIgnored) {
    auto t = fixture::tree({{"A", -1, 0, T}, {"A", 0, 1, std::nullopt}, {"A", 0, 2, N}});
    std::vector<ReplyTree> c{t};
    EXPECT_DOUBLE_EQ(toxicity_rate_by_activity(c).points.at(0).y, 0.5);
}

TEST(Homophily, PlantedPerfectMixing) {
    std::vector<ReplyTree> c{authored("T1", {T}), authored("T2", {T}), authored("N1", {N}), authored("N2", {N})};
    SnapshotStore store;
    store.add("T1", {0, {"T2"}, 1, 1});
    store.add("T2", {0, {"T1"}, 1, 1});
    store.add("N1", {0, {"N2"}, 1, 1});
    store.add("N2", {0, {"N1"}, 1, 1});
    EXPECT_NEAR(homophily(c, store, HomophilyMode::AtLeastOneToxic), 1.0, 1e-12);
    EXPECT_NEAR(homophily(c, store, HomophilyMode::Numeric), 1.0, 1e-12);
}

TEST(InfluenceGap, Formula) {
    EXPECT_DOUBLE_EQ(influence_gap(0, 0), 0.0);
    EXPECT_NEAR(influence_gap(10000, 100), std::log10(10001.0) - std::log10(101.0), 1e-15);
    // With large counts the +1 smoothing is negligible.
    EXPECT_NEAR(influence_gap(1000000, 10000), 2.0, 1e-3);
    EXPECT_LT(influence_gap(5, 50), 0.0);
}

TEST(InfluenceGap, Bins) {
    EXPECT_DOUBLE_EQ(influence_gap_bin_center(0.1), 0.25);
    EXPECT_DOUBLE_EQ(influence_gap_bin_center(-0.1), -0.25);
    EXPECT_DOUBLE_EQ(influence_gap_bin_center(9.0), influence_gap_bin_center(3.9));
    EXPECT_EQ(influence_gap_bin(9.0), influence_gap_bin(3.9));
}

TEST(Dyads, Exclusions) {
    // Root A; B replies to root (excluded); C replies to B (kept); C replies to
    // itself (excluded); D replies to C but is unscored (excluded).
    auto t = fixture::tree({{"A", -1, 0, N}, {"B", 0, 1, T}, {"C", 1, 2, T}, {"C", 2, 3, N}, {"D", 2, 4}});
    auto d = extract_dyads(t, nullptr, 10);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0].parent_user, "B");
    EXPECT_EQ(d[0].child_user, "C");
    EXPECT_TRUE(d[0].parent_toxic);
    EXPECT_TRUE(d[0].child_toxic);
    EXPECT_TRUE(d[0].follow_missing);
    EXPECT_FALSE(d[0].influence_gap);
}

TEST(Dyads, EdgeTypeFromSnapshots) {
    auto t = fixture::tree({{"A", -1, 0, N}, {"B", 0, 1, N}, {"C", 1, 2, N}, {"B", 2, 3, N}});
    SnapshotStore store;
    store.add("B", {0, {"C"}, 10000, 1});
    store.add("C", {0, {}, 100, 0});
    auto d = extract_dyads(t, &store, 10);
    ASSERT_EQ(d.size(), 2u);
    EXPECT_EQ(d[0].edge_type, EdgeType::ParentFollowsChild);
    EXPECT_EQ(d[1].edge_type, EdgeType::ChildFollowsParent);
    EXPECT_NEAR(*d[0].influence_gap, influence_gap(10000, 100), 1e-15);
    EXPECT_NEAR(*d[1].influence_gap, -*d[0].influence_gap, 1e-15);
}

TEST(ToxicReplyProbability, AllToxicBinAndOmittedBins) {
    std::vector<DyadRecord> d(3);
    for (auto& r : d) {
        r.parent_toxic = true;
        r.child_toxic = true;
        r.edge_type = EdgeType::Mutual;
    }
    auto s = toxic_reply_probability(d, DyadCondition::EdgeType, true);
    ASSERT_EQ(s.points.size(), 1u);
    EXPECT_DOUBLE_EQ(s.points[0].y, 1.0);
    EXPECT_EQ(s.points[0].n, 3u);
    EXPECT_TRUE(toxic_reply_probability(d, DyadCondition::EdgeType, false).points.empty());
    // No dyad carries an influence gap, so nothing is binned.
    EXPECT_TRUE(toxic_reply_probability(d, DyadCondition::InfluenceGap, true).points.empty());
}

TEST(TreeCurves, ConversationToxicity) {
    EXPECT_DOUBLE_EQ(*conversation_toxicity(authored("A", {T, N, N, N})), 0.25);
    std::vector<ReplyTree> clean{authored("A", {N, N}), authored("B", {N, N, N, N, N})};
    for (auto m : {TreeMeasure::Size, TreeMeasure::Depth, TreeMeasure::Width, TreeMeasure::Wiener})
        for (const auto& p : tree_toxicity_curve(clean, m).points) EXPECT_DOUBLE_EQ(p.y, 0.0);
}

TEST(TimeToSize, Examples) {
    std::vector<Node> s{{"A", -1, 1000}};
    for (int i = 1; i <= 10; ++i) s.push_back({i % 2 ? "B" : "C", 0, 1000 + 60 * i});
    std::vector<ReplyTree> c{fixture::tree(s), authored("A", {N, N, N})};
    auto r = time_to_size(c, 10);
    EXPECT_EQ(r.conversations, 1u);
    EXPECT_DOUBLE_EQ(*r.median, 600.0);

    std::vector<ReplyTree> two{fixture::tree({{"A", -1, 0}, {"B", 0, 100}}),
                               fixture::tree({{"A", -1, 0}, {"B", 0, 300}})};
    EXPECT_DOUBLE_EQ(*time_to_size(two, 1).median, 200.0);
    EXPECT_FALSE(time_to_size(two, 5).median);
}
