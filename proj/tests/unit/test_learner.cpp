#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "toxconv/errors.hpp"
#include "toxconv/learner.hpp"

using namespace toxconv;
using namespace toxconv::learner;

namespace {

// Pairwise definition: P(score_pos > score_neg) + 0.5 P(tie).
double auc_pairs(const std::vector<int>& y, const std::vector<double>& s) {
    double win = 0, pairs = 0;
    for (std::size_t i = 0; i < y.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j)
            if (y[i] == 1 && y[j] == 0) {
                pairs += 1;
                win += s[i] > s[j] ? 1.0 : s[i] == s[j] ? 0.5 : 0.0;
            }
    return win / pairs;
}

struct Data {
    Matrix X;
    std::vector<int> y;
    std::vector<std::string> groups;
};

Data noise(std::size_t n, std::size_t d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    Data out{Matrix(n, d), std::vector<int>(n), std::vector<std::string>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) out.X.at(i, j) = z(rng);
        out.y[i] = static_cast<int>(i % 2);
        out.groups[i] = "g" + std::to_string(i / 2);
    }
    return out;
}

double accuracy(const std::vector<int>& y, const std::vector<double>& p) {
    std::size_t ok = 0;
    for (std::size_t i = 0; i < y.size(); ++i) ok += (p[i] > 0.5) == (y[i] == 1);
    return static_cast<double>(ok) / y.size();
}

CVOptions small_cv() {
    CVOptions o;
    o.grid = {10, 25};
    o.outer_folds = 5;
    o.inner_folds = 3;
    o.seed = 3;
    return o;
}

}  // namespace

TEST(Gbrt, Separable) {
    Matrix X(200, 1);
    std::vector<int> y(200);
    for (std::size_t i = 0; i < 200; ++i) {
        X.at(i, 0) = static_cast<double>(i);
        y[i] = i >= 100;
    }
    auto m = fit(X, y);
    EXPECT_GE(accuracy(y, predict_proba(m, X)), 0.99);
}

TEST(Gbrt, Xor) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1, 1);
    Matrix X(400, 2);
    std::vector<int> y(400);
    for (std::size_t i = 0; i < 400; ++i) {
        X.at(i, 0) = u(rng);
        X.at(i, 1) = u(rng);
        y[i] = (X.at(i, 0) > 0) != (X.at(i, 1) > 0);
    }
    GbrtParams p;
    p.n_estimators = 200;
    EXPECT_GE(accuracy(y, predict_proba(fit(X, y, p), X)), 0.95);
}

TEST(Gbrt, Errors) {
    Matrix X(3, 1, 1.0);
    std::vector<int> same{1, 1, 1};
    EXPECT_THROW(fit(X, same), SingleClass);
    Matrix empty;
    std::vector<int> none;
    EXPECT_THROW(fit(empty, none), EmptyData);
}

TEST(Gbrt, ZeroTreesGivesPrior) {
    Matrix X(4, 1);
    for (std::size_t i = 0; i < 4; ++i) X.at(i, 0) = static_cast<double>(i);
    std::vector<int> y{0, 1, 0, 1};
    GbrtParams p;
    p.n_estimators = 0;
    for (double v : predict_proba(fit(X, y, p), X)) EXPECT_DOUBLE_EQ(v, 0.5);
}

TEST(Gbrt, TrainingLossNeverIncreases) {
    auto d = noise(300, 4, 2);
    for (std::size_t i = 0; i < 300; ++i) d.y[i] = d.X.at(i, 0) + 0.5 * d.X.at(i, 1) > 0;
    FitTrace trace;
    fit(d.X, d.y, {}, &trace);
    ASSERT_EQ(trace.loss.size(), 101u);
    for (std::size_t i = 1; i < trace.loss.size(); ++i) EXPECT_LE(trace.loss[i], trace.loss[i - 1] + 1e-12);
}

TEST(Gbrt, InvariantUnderMonotoneTransform) {
    auto d = noise(200, 3, 4);
    for (std::size_t i = 0; i < 200; ++i) d.y[i] = d.X.at(i, 0) * d.X.at(i, 1) > 0;
    Matrix Xt = d.X;
    for (auto& v : Xt.data) v = std::exp(v) * 3.0 + 1.0;
    auto a = predict_proba(fit(d.X, d.y), d.X);
    auto b = predict_proba(fit(Xt, d.y), Xt);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
}

TEST(Gbrt, MissingValuesImputed) {
    auto d = noise(100, 2, 5);
    for (std::size_t i = 0; i < 100; i += 7) d.X.at(i, 1) = std::nan("");
    auto m = fit(d.X, d.y);
    for (double p : predict_proba(m, d.X)) EXPECT_TRUE(std::isfinite(p));
}

TEST(Gbrt, StagedMatchesFull) {
    auto d = noise(100, 2, 6);
    auto m = fit(d.X, d.y);
    std::vector<std::size_t> stages{0, 50, 100};
    auto staged = staged_predict_proba(m, d.X, stages);
    EXPECT_EQ(staged[2], predict_proba(m, d.X));
    for (double v : staged[0]) EXPECT_DOUBLE_EQ(v, 0.5);
}

TEST(Auc, Examples) {
    std::vector<int> y{0, 0, 1, 1};
    EXPECT_DOUBLE_EQ(auc(y, std::vector<double>{0.1, 0.2, 0.8, 0.9}), 1.0);
    EXPECT_DOUBLE_EQ(auc(y, std::vector<double>{0.9, 0.8, 0.2, 0.1}), 0.0);
    EXPECT_DOUBLE_EQ(auc(y, std::vector<double>{0.5, 0.5, 0.5, 0.5}), 0.5);
    EXPECT_THROW(auc(std::vector<int>{1, 1}, std::vector<double>{0.1, 0.2}), SingleClass);
}

TEST(Auc, MatchesPairwiseDefinitionWithTies) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> score(0, 5);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<int> y(40);
        std::vector<double> s(40);
        for (std::size_t i = 0; i < 40; ++i) {
            y[i] = static_cast<int>((i + rep) % 3 == 0);
            s[i] = score(rng);
        }
        EXPECT_NEAR(auc(y, s), auc_pairs(y, s), 1e-12);
    }
}

TEST(Evaluate, Metrics) {
    std::vector<int> y{1, 1, 0, 0};
    auto m = evaluate(y, std::vector<double>{0.9, 0.4, 0.6, 0.1});
    EXPECT_DOUBLE_EQ(m.accuracy, 0.5);
    EXPECT_DOUBLE_EQ(m.f1, 0.5);
    EXPECT_DOUBLE_EQ(m.auc, 0.75);
}

TEST(GroupFolds, GroupsStayTogether) {
    std::vector<std::string> g;
    for (int i = 0; i < 50; ++i) g.push_back("g" + std::to_string(i % 13));
    auto folds = group_folds(g, 5, 1);
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j)
            if (g[i] == g[j]) EXPECT_EQ(folds[i], folds[j]);
    std::set<std::size_t> used(folds.begin(), folds.end());
    EXPECT_EQ(used.size(), 5u);
    EXPECT_THROW(group_folds(g, 14, 1), TooFewGroups);
}

TEST(GroupSplit, BothSidesNonEmpty) {
    std::vector<std::string> g{"a", "a", "b", "c", "c", "d", "e"};
    auto test = group_split(g, 0.2, 3);
    EXPECT_EQ(test[0], test[1]);
    EXPECT_EQ(test[3], test[4]);
    EXPECT_NE(std::count(test.begin(), test.end(), true), 0);
    EXPECT_NE(std::count(test.begin(), test.end(), false), 0);
}

TEST(NestedCv, NoiseIsChance) {
    auto d = noise(2000, 5, 8);
    auto r = nested_cv(d.X, d.y, d.groups, small_cv());
    EXPECT_NEAR(r.accuracy.mean, 0.5, 0.05);
    EXPECT_EQ(r.folds.size(), 5u);
    EXPECT_LE(r.accuracy.ci.lo, r.accuracy.mean);
    EXPECT_GE(r.accuracy.ci.hi, r.accuracy.mean);
}

TEST(NestedCv, DeterministicAcrossWorkers) {
    auto d = noise(300, 3, 9);
    for (std::size_t i = 0; i < 300; ++i) d.y[i] = d.X.at(i, 0) > 0;
    auto o = small_cv();
    auto a = nested_cv(d.X, d.y, d.groups, o);
    o.workers = 3;
    auto b = nested_cv(d.X, d.y, d.groups, o);
    std::ostringstream ja, jb;
    write_cv_report_json(ja, a);
    write_cv_report_json(jb, b);
    EXPECT_EQ(ja.str(), jb.str());
    EXPECT_GT(a.accuracy.mean, 0.85);
}

TEST(ModelIo, RoundTrip) {
    auto d = noise(150, 3, 10);
    d.X.at(0, 2) = std::nan("");
    auto m = fit(d.X, d.y);
    m.feature_names = {"a", "b", "c"};
    std::stringstream buf;
    save_model(buf, m);
    auto back = load_model(buf);
    EXPECT_EQ(back.feature_names, m.feature_names);
    EXPECT_EQ(back.trees.size(), m.trees.size());
    EXPECT_EQ(predict_proba(back, d.X), predict_proba(m, d.X));
}

TEST(ModelIo, RejectsGarbage) {
    std::istringstream bad("{\"version\": \"other\"}");
    EXPECT_THROW(load_model(bad), SchemaViolation);
    std::istringstream junk("not json");
    EXPECT_THROW(load_model(junk), SchemaViolation);
}
