#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "toxconv/errors.hpp"
#include "toxconv/features.hpp"

using namespace toxconv;
using namespace toxconv::features;

namespace {

FeatureVector only(const ConversationPrefix& p, std::vector<std::string> sets, const FeatureContext& ctx = {}) {
    return prefix_features(p, ctx, FeatureCatalog::prefix(p.k, std::move(sets)));
}

SnapshotStore friends_store() {
    SnapshotStore s;
    s.add("A", {0, {"B"}, 10, 1});
    s.add("B", {0, {"A", "C", "a", "b"}, 20, 4});
    s.add("C", {0, {"a", "b", "x", "y"}, 5, 4});
    return s;
}

}  // namespace

TEST(PrefixFeatures, ContentMean) {
    auto t = fixture::tree({{"A", -1, 0, 0.1}, {"B", 0, 1, 0.2}, {"C", 1, 2, 0.9}});
    auto fv = only(prefix(t, 2), {"content_toxicity"});
    EXPECT_NEAR(*fv.get("content.tox_mean"), 0.4, 1e-12);
    EXPECT_NEAR(*fv.get("content.tox_max"), 0.9, 1e-12);
}

TEST(PrefixFeatures, ArrivalIds) {
    auto t = fixture::tree({{"A", -1, 0}, {"B", 0, 1}, {"C", 0, 2}, {"B", 2, 3}});
    auto fv = only(prefix(t, 3), {"arrival"});
    EXPECT_EQ(*fv.get("arrival.temporal_id_1"), 1.0);
    EXPECT_EQ(*fv.get("arrival.temporal_id_2"), 2.0);
    EXPECT_EQ(*fv.get("arrival.temporal_id_3"), 1.0);
    EXPECT_EQ(*fv.get("arrival.unique_users_1"), 1.0);
    EXPECT_EQ(*fv.get("arrival.unique_users_2"), 2.0);
    EXPECT_EQ(*fv.get("arrival.unique_users_3"), 2.0);
}

TEST(PrefixFeatures, ArrivalMissingBeyondTree) {
    auto t = fixture::tree({{"A", -1, 0}, {"B", 0, 1}});
    auto fv = prefix_features(prefix(t, 1), {}, FeatureCatalog::prefix(3, {"arrival"}));
    EXPECT_TRUE(fv.has("arrival.temporal_id_3"));
    EXPECT_FALSE(fv.get("arrival.temporal_id_3"));
}

TEST(PrefixFeatures, Rates) {
    auto t = fixture::tree({{"A", -1, 0}, {"B", 0, 60}, {"C", 0, 120}});
    auto fv = only(prefix(t, 2), {"rate"});
    EXPECT_DOUBLE_EQ(*fv.get("rate.root_to_2"), 120.0);
    EXPECT_DOUBLE_EQ(*fv.get("rate.mean_gap"), 60.0);
}

TEST(PrefixFeatures, NamesDeterministicAndUnique) {
    auto t = fixture::tree({{"A", -1, 0, 0.1}, {"B", 0, 1, 0.2}, {"C", 1, 2, 0.9}, {"A", 2, 3, 0.3}});
    auto store = friends_store();
    UserAlignments align{{"A", 0.5}, {"B", -0.2}};
    FeatureContext ctx{&store, &align};
    auto p = prefix(t, 3);
    auto a = prefix_features(p, ctx, FeatureCatalog::prefix(3));
    auto b = prefix_features(p, ctx, FeatureCatalog::prefix(3));
    EXPECT_EQ(a.names(), b.names());
    EXPECT_NO_THROW(a.check_unique());

    // Names depend on the catalog only, not on the conversation.
    auto other = fixture::tree({{"X", -1, 0, 0.9}, {"Y", 0, 5, 0.9}, {"X", 1, 9, 0.1}, {"Z", 0, 11}});
    EXPECT_EQ(prefix_features(prefix(other, 3), ctx, FeatureCatalog::prefix(3)).names(), a.names());
}

TEST(PrefixFeatures, Errors) {
    auto t = fixture::tree({{"A", -1, 0}, {"B", 0, 1}});
    auto p = prefix(t, 1);
    EXPECT_THROW(prefix_features(p, {}, FeatureCatalog::next_reply()), CatalogMismatch);
    ConversationPrefix root_only{fixture::tree({{"A", -1, 0}}), 1, {}};
    EXPECT_THROW(prefix_features(root_only, {}, FeatureCatalog::prefix(1, {"rate"})), EmptyPrefix);
    EXPECT_THROW(FeatureCatalog::prefix(10, {"bogus"}), InvalidArgument);
    EXPECT_THROW(FeatureCatalog::prefix(0), InvalidArgument);
}

TEST(Alignment, Examples) {
    AlignmentTable table({{"d1", 0.8}, {"d2", -0.2}, {"d3", -0.5}});
    std::vector<std::string> both{"d1", "d2"}, none{}, left{"d3"}, unknown{"zz"};
    EXPECT_NEAR(*user_alignment(both, table), 0.3, 1e-12);
    EXPECT_EQ(leaning(*user_alignment(both, table)), Leaning::Right);
    EXPECT_FALSE(user_alignment(none, table));
    EXPECT_FALSE(user_alignment(unknown, table));
    EXPECT_DOUBLE_EQ(*user_alignment(left, table), -0.5);
    EXPECT_EQ(leaning(-0.5), Leaning::Left);
    EXPECT_EQ(leaning(0.0), Leaning::Right);
}

TEST(Alignment, TableFromStream) {
    std::istringstream in("# header\nnews.example\t0.25\nleft.example\t-1\n");
    auto t = AlignmentTable::from_stream(in);
    EXPECT_DOUBLE_EQ(*t.lookup("news.example"), 0.25);
    EXPECT_FALSE(t.lookup("other"));
}

TEST(NextReply, StateZeroForNewUser) {
    auto t = fixture::tree({{"A", -1, 0, 0.9}, {"B", 0, 1, 0.9}});
    auto fv = next_reply_features(t, "Z", t.post(1).id, 2, {}, FeatureCatalog::next_reply({"conversation_state"}));
    EXPECT_DOUBLE_EQ(*fv.get("state.toxic_from_user"), 0.0);
    EXPECT_DOUBLE_EQ(*fv.get("state.from_user"), 0.0);
}

TEST(NextReply, EdgeTypeAndCommonFriends) {
    auto t = fixture::tree({{"A", -1, 0}, {"B", 0, 1}, {"C", 1, 2}});
    auto store = friends_store();
    FeatureContext ctx{&store};
    auto cat = FeatureCatalog::next_reply({"user_parent"});

    // A replies to B: mutual follow.
    auto ab = next_reply_features(t, "A", t.post(1).id, 3, ctx, cat);
    EXPECT_DOUBLE_EQ(*ab.get("up.edge_mutual"), 1.0);
    EXPECT_DOUBLE_EQ(*ab.get("up.edge_none"), 0.0);

    // C replies to B: their friend lists share {a, b}.
    auto cb = next_reply_features(t, "C", t.post(1).id, 3, ctx, cat);
    EXPECT_DOUBLE_EQ(*cb.get("up.common_friends"), 2.0);
    EXPECT_DOUBLE_EQ(*cb.get("up.edge_target_follows_user"), 1.0);
}

TEST(NextReply, CommonFriendsFraction) {
    SnapshotStore s;
    s.add("U", {0, {"a", "b", "c"}, 1, 3});
    s.add("P", {0, {"a", "b", "d"}, 1, 3});
    auto t = fixture::tree({{"R", -1, 0}, {"P", 0, 1}});
    FeatureContext ctx{&s};
    auto fv = next_reply_features(t, "U", t.post(1).id, 2, ctx, FeatureCatalog::next_reply({"user_parent"}));
    EXPECT_DOUBLE_EQ(*fv.get("up.common_friends"), 2.0);
    EXPECT_DOUBLE_EQ(*fv.get("up.common_friends_frac"), 0.5);
}

TEST(NextReply, UnknownParent) {
    auto t = fixture::tree({{"A", -1, 0}, {"B", 0, 1}});
    EXPECT_THROW(next_reply_features(t, "C", "nope", 2, {}, FeatureCatalog::next_reply({"conversation_state"})),
                 UnknownParent);
}

TEST(PairDifference, Examples) {
    FeatureVector a, b;
    a.add("x", 3.0);
    a.add("y", kMissing);
    b.add("x", 1.0);
    b.add("y", 5.0);
    auto d = pair_difference(a, b);
    EXPECT_DOUBLE_EQ(*d.get("x"), 2.0);
    EXPECT_TRUE(d.has("y"));
    EXPECT_FALSE(d.get("y"));

    auto self = pair_difference(b, b);
    for (double v : self.values()) EXPECT_DOUBLE_EQ(v, 0.0);

    FeatureVector c;
    c.add("z", 1.0);
    EXPECT_THROW(pair_difference(a, c), CatalogMismatch);
}

TEST(FeatureVector, DuplicateNamesRejected) {
    FeatureVector v;
    v.add("a", 1.0);
    v.add("a", 2.0);
    EXPECT_THROW(v.check_unique(), InvalidArgument);
}
