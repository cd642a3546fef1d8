#include <algorithm>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "toxconv/errors.hpp"
#include "toxconv/ingestion.hpp"

using namespace toxconv;
using fixture::post;

namespace {

std::string line(const Post& p) {
    std::ostringstream out;
    write_post_line(out, p);
    return out.str();
}

CorpusFilter tracked(std::initializer_list<std::string> users) {
    CorpusFilter f;
    f.tracked_accounts = users;
    return f;
}

}  // namespace

TEST(ParsePosts, ThreeValidLines) {
    std::istringstream in(line(post("a", "A")) + line(post("b", "B", "a", 1)) + line(post("c", "C", "b", 2)));
    auto r = parse_posts(in);
    EXPECT_EQ(r.posts.size(), 3u);
    EXPECT_EQ(r.malformed, 0u);
    EXPECT_EQ(r.posts[1].parent, "a");
}

TEST(ParsePosts, MalformedLineSkipped) {
    std::istringstream in(line(post("a", "A")) + "{not json\n" + line(post("b", "B", "a", 1)));
    auto r = parse_posts(in);
    EXPECT_EQ(r.posts.size(), 2u);
    EXPECT_EQ(r.malformed, 1u);
}

TEST(ParsePosts, SchemaProblemsCountAsMalformed) {
    std::istringstream in(R"({"id":"a","time":1})" "\n"
                          R"({"id":"b","author":"B","time":1,"toxicity":2.0})" "\n"
                          R"({"id":"c","author":"C","time":"soon"})" "\n");
    auto r = parse_posts(in);
    EXPECT_TRUE(r.posts.empty());
    EXPECT_EQ(r.malformed, 3u);
}

TEST(ParsePosts, DuplicateIdsKeepFirst) {
    auto first = post("a", "A");
    auto second = post("a", "Z", std::nullopt, 9);
    std::istringstream in(line(first) + line(second));
    auto r = parse_posts(in);
    ASSERT_EQ(r.posts.size(), 1u);
    EXPECT_EQ(r.duplicates, 1u);
    EXPECT_EQ(r.posts[0].author, "A");
}

TEST(ParsePosts, RoundTrip) {
    auto p = post("x", "A", "y", 42, 0.25);
    p.mentions = {"B", "C"};
    p.url_domains = {"news.example"};
    p.root = "y";
    EXPECT_EQ(post_from_json_line(line(p)), p);

    Post bare;
    bare.id = "z";
    bare.author = "Q";
    EXPECT_EQ(post_from_json_line(line(bare)), bare);
}

TEST(ParseSnapshots, RoundTripAndDuplicates) {
    std::ostringstream out;
    write_snapshot_line(out, "A", {5, {"B", "C"}, 10, 2});
    write_snapshot_line(out, "A", {5, {"D"}, 11, 1});
    write_snapshot_line(out, "B", {6, {}, 0, 0});
    out << "garbage\n";
    std::istringstream in(out.str());
    auto r = parse_snapshots(in);
    EXPECT_EQ(r.store.user_count(), 2u);
    EXPECT_EQ(r.duplicates, 1u);
    EXPECT_EQ(r.malformed, 1u);
    EXPECT_EQ(r.store.at("A", 5)->friends, (std::vector<std::string>{"B", "C"}));
}

TEST(ParsePosts, FailingStreamThrows) {
    std::istringstream in;
    in.setstate(std::ios::badbit);
    EXPECT_THROW(parse_posts(in), UnreadableInput);
}

TEST(LinkReplies, Chain) {
    auto r = link_replies({post("A", "u"), post("B", "v", "A", 1), post("C", "w", "B", 2)});
    ASSERT_EQ(r.trees.size(), 1u);
    EXPECT_EQ(r.trees[0].size(), 3u);
    EXPECT_EQ(r.trees[0].depth(2), 2u);
}

TEST(LinkReplies, OrphanBecomesRoot) {
    auto r = link_replies({post("B", "u", "X", 1)});
    ASSERT_EQ(r.trees.size(), 1u);
    EXPECT_TRUE(r.trees[0].orphan_rooted());
    EXPECT_EQ(r.orphan_rooted, 1u);
    EXPECT_EQ(r.trees[0].size(), 1u);
}

TEST(LinkReplies, CycleDropped) {
    auto r = link_replies({post("A", "u", "B", 1), post("B", "v", "A", 2), post("C", "w", "A", 3), post("R", "x")});
    ASSERT_EQ(r.trees.size(), 1u);
    EXPECT_EQ(r.trees[0].root().id, "R");
    EXPECT_EQ(r.cycle_members, (std::vector<std::string>{"A", "B"}));
    EXPECT_EQ(r.dropped_below_cycle, 1u);
}

TEST(LinkReplies, PartitionsPostsAndIgnoresInputOrder) {
    std::vector<Post> posts{post("r1", "A"),          post("a", "B", "r1", 1), post("b", "C", "a", 2),
                            post("r2", "D", {}, 5),   post("c", "A", "r2", 6), post("d", "B", "c", 7),
                            post("e", "C", "r1", 3),  post("f", "D", "zz", 4)};
    auto base = link_replies(posts);
    std::size_t total = 0;
    for (const auto& t : base.trees) total += t.size();
    EXPECT_EQ(total, posts.size());

    std::mt19937 rng(3);
    for (int rep = 0; rep < 20; ++rep) {
        std::shuffle(posts.begin(), posts.end(), rng);
        auto again = link_replies(posts);
        ASSERT_EQ(again.trees.size(), base.trees.size());
        for (std::size_t i = 0; i < base.trees.size(); ++i) {
            auto a = base.trees[i].posts(), b = again.trees[i].posts();
            EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin(), b.end()));
        }
    }
}

TEST(Filter, RootOnlyExcluded) {
    auto trees = link_replies({post("r", "T")}).trees;
    EXPECT_TRUE(filter_conversations(trees, tracked({"T"})).empty());
}

TEST(Filter, SingleUserExcluded) {
    auto trees = link_replies({post("r", "T"), post("a", "T", "r", 1), post("b", "T", "a", 2), post("c", "T", "r", 3)})
                     .trees;
    EXPECT_TRUE(filter_conversations(trees, tracked({"T"})).empty());
}

TEST(Filter, TrackedRootWithReplyKept) {
    auto trees = link_replies({post("r", "T"), post("a", "U", "r", 1)}).trees;
    EXPECT_EQ(filter_conversations(trees, tracked({"T"})).size(), 1u);
}

TEST(Filter, MentionOfTrackedAccountQualifies) {
    auto root = post("r", "X");
    root.mentions = {"T"};
    auto trees = link_replies({root, post("a", "U", "r", 1)}).trees;
    EXPECT_EQ(filter_conversations(trees, tracked({"T"})).size(), 1u);
    EXPECT_TRUE(filter_conversations(trees, tracked({"S"})).empty());
}

TEST(Filter, OrphanRootedExcluded) {
    auto trees = link_replies({post("r", "T", "gone", 0), post("a", "U", "r", 1)}).trees;
    EXPECT_TRUE(filter_conversations(trees, tracked({"T"})).empty());
}

TEST(Filter, EmptyTrackedSetRejected) {
    auto trees = link_replies({post("r", "T"), post("a", "U", "r", 1)}).trees;
    EXPECT_THROW(filter_conversations(trees, CorpusFilter{}), InvalidArgument);
}

TEST(Flatten, FillsRoot) {
    auto trees = link_replies({post("r", "T"), post("a", "U", "r", 1), post("b", "V", "a", 2)}).trees;
    auto flat = flatten_with_roots(trees);
    ASSERT_EQ(flat.size(), 3u);
    for (const auto& p : flat) EXPECT_EQ(p.root, "r");
}
