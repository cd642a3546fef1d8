#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "toxconv/errors.hpp"
#include "toxconv/ingestion.hpp"
#include "toxconv/synth.hpp"
#include "toxconv/toxicity.hpp"

using namespace toxconv;
using namespace toxconv::synth;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("toxconv_synth_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<ReplyTree> linked(const Corpus& c) { return link_replies(c.posts).trees; }

}  // namespace

TEST(Synth, SameSeedSameBytes) {
    GeneratorConfig cfg;
    cfg.n_conversations = 40;
    auto a = scratch("a"), b = scratch("b");
    write_corpus(generate(cfg), cfg, a);
    write_corpus(generate(cfg), cfg, b);
    for (const char* f : {"posts.jsonl", "snapshots.jsonl", "alignment.tsv", "tracked.txt", "latents.csv", "config.json"}) {
        ASSERT_TRUE(fs::exists(a / f)) << f;
        EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    }
    cfg.seed = 2;
    auto c = scratch("c");
    write_corpus(generate(cfg), cfg, c);
    EXPECT_NE(slurp(a / "posts.jsonl"), slurp(c / "posts.jsonl"));
    for (const auto& d : {a, b, c}) fs::remove_all(d);
}

TEST(Synth, EmptyCorpus) {
    GeneratorConfig cfg;
    cfg.n_conversations = 0;
    auto c = generate(cfg);
    EXPECT_TRUE(c.posts.empty());
    EXPECT_TRUE(c.z_structure.empty());
}

TEST(Synth, ConversationsPassFilters) {
    GeneratorConfig cfg;
    cfg.n_conversations = 200;
    auto c = generate(cfg);
    auto trees = linked(c);
    EXPECT_EQ(trees.size(), 200u);
    EXPECT_EQ(filter_conversations(trees, {c.tracked, 2}).size(), 200u);
    for (const auto& t : trees) {
        EXPECT_FALSE(t.clock_skew());
        for (const auto& p : t.posts()) ASSERT_TRUE(p.toxicity);
    }
}

TEST(Synth, InjectedViolationsFailFilters) {
    GeneratorConfig cfg;
    cfg.n_conversations = 50;
    cfg.orphan_replies = 4;
    cfg.untracked_roots = 3;
    cfg.solo_conversations = 2;
    auto c = generate(cfg);
    auto linkr = link_replies(c.posts);
    EXPECT_EQ(linkr.orphan_rooted, 4u);
    EXPECT_EQ(filter_conversations(linkr.trees, {c.tracked, 2}).size(), 50u);
}

TEST(Synth, PlantedRateRecoveredAtScale) {
    GeneratorConfig cfg;
    cfg.n_conversations = 16000;
    cfg.root_toxic_prob = 1.0;
    cfg.planted[1] = {0.3, 0.3, 0.3, 0.3};
    auto c = generate(cfg);
    std::size_t dyads = 0, toxic = 0;
    for (const auto& t : linked(c))
        for (ReplyTree::Index i = 1; i < t.size(); ++i)
            if (is_toxic(*t.post(t.parent(i)).toxicity)) {
                ++dyads;
                toxic += is_toxic(*t.post(i).toxicity);
            }
    ASSERT_GE(dyads, 100000u);
    EXPECT_NEAR(static_cast<double>(toxic) / dyads, 0.30, 0.01);
}

TEST(SynthConfig, JsonRoundTrip) {
    GeneratorConfig cfg;
    cfg.seed = 77;
    cfg.n_conversations = 12;
    cfg.planted[0][2] = 0.05;
    cfg.embeddedness_logit = {0.0, -0.5};
    auto back = config_from_json(config_to_json(cfg));
    EXPECT_EQ(back.seed, 77u);
    EXPECT_EQ(back.n_conversations, 12u);
    EXPECT_DOUBLE_EQ(back.planted[0][2], 0.05);
    EXPECT_EQ(back.embeddedness_logit, cfg.embeddedness_logit);
    EXPECT_EQ(config_to_json(back), config_to_json(cfg));
}

TEST(SynthConfig, Rejections) {
    EXPECT_THROW(config_from_json(R"({"no_such_key": 1})"), InvalidConfig);
    EXPECT_THROW(config_from_json("[1,2]"), InvalidConfig);
    EXPECT_THROW(config_from_json(R"({"p_in": 1.5})"), InvalidConfig);
    GeneratorConfig cfg;
    cfg.min_replies = 10;
    cfg.max_replies = 5;
    EXPECT_THROW(validate(cfg), InvalidConfig);
}
