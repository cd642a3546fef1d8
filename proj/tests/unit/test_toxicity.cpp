#include <map>
#include <random>
#include <sstream>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>
#include <json.hpp>

#include "fixtures.hpp"
#include "toxconv/errors.hpp"
#include "toxconv/toxicity.hpp"

using namespace toxconv;

namespace {

// Straight-from-definition nominal alpha: coincidence counts summed over all
// ordered pairs of labels within each item, weighted by 1 / (m_u - 1).
double alpha_oracle(const AnnotationMatrix& m) {
    std::map<std::pair<int, int>, double> o;
    for (std::size_t i = 0; i < m.items(); ++i) {
        std::vector<int> v;
        for (std::size_t a = 0; a < m.annotators(); ++a)
            if (m.at(i, a) != AnnotationMatrix::kMissing) v.push_back(m.at(i, a));
        if (v.size() < 2) continue;
        for (std::size_t x = 0; x < v.size(); ++x)
            for (std::size_t y = 0; y < v.size(); ++y)
                if (x != y) o[{v[x], v[y]}] += 1.0 / (v.size() - 1);
    }
    std::map<int, double> nc;
    double n = 0, disagree = 0;
    for (auto& [k, w] : o) {
        nc[k.first] += w;
        n += w;
        if (k.first != k.second) disagree += w;
    }
    double expected = 0;
    for (auto& [c, a] : nc)
        for (auto& [d, b] : nc)
            if (c != d) expected += a * b;
    expected /= n * (n - 1);
    return 1.0 - (disagree / n) / expected;
}

AnnotationMatrix matrix(const std::vector<std::vector<int>>& rows) {
    AnnotationMatrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t a = 0; a < rows[i].size(); ++a) m.set(i, a, rows[i][a]);
    return m;
}

}  // namespace

TEST(Binarize, StrictThreshold) {
    EXPECT_EQ(binarize(0.54, 0.531), Label::Toxic);
    EXPECT_EQ(binarize(0.531, 0.531), Label::Nontoxic);
    EXPECT_EQ(binarize(0.0, 0.531), Label::Nontoxic);
    EXPECT_EQ(binarize(1.0), Label::Toxic);
}

TEST(TuneThreshold, HandExample) {
    std::vector<double> scores{0.1, 0.2, 0.8, 0.9}, grid{0.5};
    std::vector<Label> gold{Label::Nontoxic, Label::Nontoxic, Label::Toxic, Label::Toxic};
    auto c = tune_threshold(scores, gold, grid);
    EXPECT_DOUBLE_EQ(c.threshold, 0.5);
    EXPECT_DOUBLE_EQ(c.f1, 1.0);
}

TEST(TuneThreshold, SmallestOfTiedThresholds) {
    std::vector<double> scores{0.1, 0.2, 0.8, 0.9}, grid{0.7, 0.3, 0.5, 0.95};
    std::vector<Label> gold{Label::Nontoxic, Label::Nontoxic, Label::Toxic, Label::Toxic};
    auto c = tune_threshold(scores, gold, grid);
    EXPECT_DOUBLE_EQ(c.threshold, 0.3);
    EXPECT_DOUBLE_EQ(c.f1, 1.0);
}

TEST(TuneThreshold, SingleClassGoldRejected) {
    std::vector<double> scores{0.1, 0.9}, grid{0.5};
    std::vector<Label> gold{Label::Toxic, Label::Toxic};
    EXPECT_THROW(tune_threshold(scores, gold, grid), DegenerateGold);
}

TEST(TuneThreshold, ChosenF1IsGridMaximum) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<double> scores(200), grid;
    std::vector<Label> gold(200);
    for (std::size_t i = 0; i < 200; ++i) {
        gold[i] = i % 3 == 0 ? Label::Toxic : Label::Nontoxic;
        scores[i] = std::clamp(u(rng) * 0.7 + (gold[i] == Label::Toxic ? 0.3 : 0.0), 0.0, 1.0);
    }
    for (int g = 1; g < 20; ++g) grid.push_back(g / 20.0);
    auto c = tune_threshold(scores, gold, grid);
    for (double t : grid) EXPECT_LE(f1_at(scores, gold, t), c.f1);
}

TEST(MajorityVote, Examples) {
    auto m = matrix({{1, 1, 0}, {1, 0, -1}, {0, 0, 0}});
    auto v = majority_vote(m);
    EXPECT_EQ(v, (std::vector<Label>{Label::Toxic, Label::Nontoxic, Label::Nontoxic}));
}

TEST(MajorityVote, UnlabelledItemRejected) {
    EXPECT_THROW(majority_vote(matrix({{-1, -1}})), InvalidArgument);
}

TEST(Alpha, PerfectAgreement) {
    std::vector<std::vector<int>> rows;
    for (int i = 0; i < 10; ++i) rows.push_back({i % 2, i % 2, i % 2});
    EXPECT_DOUBLE_EQ(krippendorff_alpha(matrix(rows)), 1.0);
}

TEST(Alpha, TwoItemHandExamples) {
    EXPECT_DOUBLE_EQ(krippendorff_alpha(matrix({{0, 0}, {1, 1}})), 1.0);
    EXPECT_NEAR(krippendorff_alpha(matrix({{0, 1}, {1, 0}})), -0.5, 1e-12);
}

TEST(Alpha, FairCoinNearZero) {
    std::mt19937_64 rng(11);
    std::bernoulli_distribution coin(0.5);
    AnnotationMatrix m(10000, 3);
    for (std::size_t i = 0; i < m.items(); ++i)
        for (std::size_t a = 0; a < 3; ++a) m.set(i, a, coin(rng) ? 1 : 0);
    EXPECT_LT(std::abs(krippendorff_alpha(m)), 0.05);
}

TEST(Alpha, MatchesDefinitionWithMissingCells) {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> cell(-1, 2);
    for (int rep = 0; rep < 50; ++rep) {
        AnnotationMatrix m(30, 4);
        for (std::size_t i = 0; i < 30; ++i)
            for (std::size_t a = 0; a < 4; ++a) m.set(i, a, cell(rng));
        EXPECT_NEAR(krippendorff_alpha(m), alpha_oracle(m), 1e-12);
    }
}

TEST(Alpha, TooFewPairableItems) {
    EXPECT_THROW(krippendorff_alpha(matrix({{0, 0}, {1, -1}})), InsufficientData);
}

TEST(StubScorer, LogisticOfMatchedWeights) {
    StubScorer s({{"awful", 2.0}, {"thanks", -1.0}});
    EXPECT_DOUBLE_EQ(s.score("nothing here"), 0.5);
    EXPECT_NEAR(s.score("You are AWFUL, awful!"), 1.0 / (1.0 + std::exp(-4.0)), 1e-15);
    EXPECT_NEAR(s.score("thanks"), 1.0 / (1.0 + std::exp(1.0)), 1e-15);
}

TEST(StubScorer, ReadsLexicon) {
    std::istringstream in("# comment\nawful\t3\nnice\t-2\n");
    auto s = StubScorer::from_stream(in);
    EXPECT_NEAR(s.score("awful"), 1.0 / (1.0 + std::exp(-3.0)), 1e-15);
}

TEST(ScorePosts, FillsOnlyMissingUnlessOverwrite) {
    StubScorer s({{"awful", 2.0}});
    std::vector<Post> posts{fixture::post("a", "A"), fixture::post("b", "B"), fixture::post("c", "C")};
    posts[0].text = "awful";
    posts[1].toxicity = 0.1;
    posts[2].text.reset();
    auto r = score_posts(posts, s);
    EXPECT_EQ(r.scored, 1u);
    EXPECT_EQ(r.kept, 1u);
    EXPECT_EQ(r.no_text, 1u);
    EXPECT_DOUBLE_EQ(*posts[1].toxicity, 0.1);
    EXPECT_FALSE(posts[2].toxicity);

    auto again = score_posts(posts, s, true);
    EXPECT_EQ(again.scored, 2u);
    EXPECT_DOUBLE_EQ(*posts[1].toxicity, 0.5);
}

TEST(RemoteScorer, TalksToLocalServerAndRetries) {
    httplib::Server server;
    std::atomic<int> calls{0};
    server.Post("/score", [&](const httplib::Request& req, httplib::Response& res) {
        int n = ++calls;
        if (req.get_header_value("Authorization") != "Bearer k") {
            res.status = 401;
            return;
        }
        auto text = nlohmann::json::parse(req.body).at("text").get<std::string>();
        if (text == "flaky" && n % 2 == 1) {
            res.status = 503;
            return;
        }
        if (text == "broken") {
            res.status = 500;
            return;
        }
        double score = text == "bad" ? 0.9 : 0.1;
        res.set_content(nlohmann::json{{"score", score}}.dump(), "application/json");
    });
    int port = server.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port, 0);
    std::thread th([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    RemoteScorerConfig cfg;
    cfg.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/score";
    cfg.api_key = "k";
    cfg.max_retries = 2;
    cfg.base_backoff = std::chrono::milliseconds(1);
    cfg.max_in_flight = 1;
    RemoteScorer scorer(cfg);
    std::vector<std::string> texts{"bad", "good", "broken"};
    auto out = scorer.score_batch(texts);
    ASSERT_EQ(out.size(), 3u);
    EXPECT_DOUBLE_EQ(out[0].value(), 0.9);
    EXPECT_DOUBLE_EQ(out[1].value(), 0.1);
    EXPECT_FALSE(out[2]);

    std::vector<std::string> flaky{"flaky"};
    EXPECT_TRUE(scorer.score_batch(flaky)[0].has_value());

    server.stop();
    th.join();
}
