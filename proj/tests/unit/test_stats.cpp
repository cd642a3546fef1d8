#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "toxconv/stats.hpp"

using namespace toxconv::stats;

namespace {

std::size_t h_index_oracle(std::vector<double> v) {
    std::size_t best = 0;
    for (std::size_t h = 0; h <= v.size(); ++h)
        if (std::count_if(v.begin(), v.end(), [&](double x) { return x >= static_cast<double>(h); }) >=
            static_cast<long>(h))
            best = h;
    return best;
}

// Mean absolute difference over all ordered pairs, halved and scaled by the mean.
double gini_oracle(const std::vector<double>& v) {
    double s = 0, total = 0;
    for (double a : v) {
        total += a;
        for (double b : v) s += std::abs(a - b);
    }
    if (total == 0) return 0;
    return s / (2.0 * v.size() * total);
}

}  // namespace

TEST(HIndex, Examples) {
    EXPECT_EQ(h_index(std::vector<double>{}), 0u);
    EXPECT_EQ(h_index(std::vector<double>{1, 1, 1}), 1u);
    EXPECT_EQ(h_index(std::vector<double>{5, 3, 1}), 2u);
}

TEST(HIndex, MatchesExhaustiveSearch) {
    std::mt19937 rng(1);
    std::uniform_int_distribution<int> d(0, 12);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> v(rep % 15);
        for (auto& x : v) x = d(rng);
        EXPECT_EQ(h_index(v), h_index_oracle(v));
    }
}

TEST(Gini, Examples) {
    EXPECT_DOUBLE_EQ(gini(std::vector<double>{1, 1, 1, 1}), 0.0);
    EXPECT_DOUBLE_EQ(gini(std::vector<double>{0, 0, 0, 1}), 0.75);
    EXPECT_DOUBLE_EQ(gini(std::vector<double>{}), 0.0);
    EXPECT_DOUBLE_EQ(gini(std::vector<double>{0, 0}), 0.0);
}

TEST(Gini, MatchesPairwiseDefinitionAndIsScaleInvariant) {
    std::mt19937 rng(2);
    std::exponential_distribution<double> d(1.0);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> v(1 + rep % 20);
        for (auto& x : v) x = d(rng);
        double g = gini(v);
        EXPECT_NEAR(g, gini_oracle(v), 1e-12);
        EXPECT_GE(g, 0.0);
        EXPECT_LE(g, 1.0);
        for (auto& x : v) x *= 7.5;
        EXPECT_NEAR(gini(v), g, 1e-12);
    }
}

TEST(Entropy, Examples) {
    EXPECT_DOUBLE_EQ(entropy(std::vector<double>{1, 1, 1, 1}), 2.0);
    EXPECT_DOUBLE_EQ(entropy(std::vector<double>{1}), 0.0);
    EXPECT_NEAR(entropy(std::vector<double>{3, 1}), 0.8113, 1e-4);
}

TEST(ProportionCi, Examples) {
    auto zero = proportion_ci(0, 10);
    EXPECT_DOUBLE_EQ(zero.lo, 0.0);
    auto half = proportion_ci(5, 10);
    EXPECT_NEAR(half.lo + half.hi, 1.0, 1e-12);
    EXPECT_LT(half.lo, 0.5);
    EXPECT_GT(half.hi, 0.5);
    auto big = proportion_ci(50, 100);
    EXPECT_NEAR(big.lo, 0.404, 0.005);
    EXPECT_NEAR(big.hi, 0.596, 0.005);
}

TEST(ProportionCi, AlwaysInsideUnitIntervalAndContainsEstimate) {
    for (std::size_t n = 1; n <= 40; ++n)
        for (std::size_t k = 0; k <= n; ++k) {
            auto ci = proportion_ci(k, n);
            double p = static_cast<double>(k) / n;
            EXPECT_GE(ci.lo, 0.0);
            EXPECT_LE(ci.hi, 1.0);
            EXPECT_LE(ci.lo, p + 1e-12);
            EXPECT_GE(ci.hi, p - 1e-12);
        }
}

TEST(ZValue, StandardLevels) {
    EXPECT_NEAR(z_value(0.95), 1.959964, 1e-5);
    EXPECT_NEAR(z_value(0.99), 2.575829, 1e-5);
}

TEST(LogBucketer, Boundaries) {
    LogBucketer b(2.0);
    EXPECT_EQ(b.bucket(0.0), LogBucketer::kZeroBucket);
    EXPECT_EQ(b.bucket(1.0), 0);
    EXPECT_EQ(b.bucket(1.999), 0);
    EXPECT_EQ(b.bucket(2.0), 1);
    EXPECT_EQ(b.bucket(1024.0), 10);
    EXPECT_EQ(b.bucket(0.5), -1);
    EXPECT_DOUBLE_EQ(b.lower_edge(3), 8.0);
    EXPECT_DOUBLE_EQ(b.lower_edge(LogBucketer::kZeroBucket), 0.0);

    LogBucketer ten(10.0);
    EXPECT_EQ(ten.bucket(999.0), 2);
    EXPECT_EQ(ten.bucket(1000.0), 3);
}

TEST(LogBucketer, EdgesAreMonotone) {
    LogBucketer b(2.0);
    for (int k = -5; k < 30; ++k) {
        EXPECT_EQ(b.bucket(b.lower_edge(k)), k);
        EXPECT_LT(b.lower_edge(k), b.lower_edge(k + 1));
    }
}

TEST(Quantiles, LinearInterpolation) {
    std::vector<double> v{4, 1, 3, 2};
    EXPECT_DOUBLE_EQ(quantile(v, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(quantile(v, 1.0), 4.0);
    EXPECT_DOUBLE_EQ(median(v), 2.5);
    EXPECT_DOUBLE_EQ(quantile(v, 0.25), 1.75);
}

TEST(Moments, VarianceAndPearson) {
    std::vector<double> x{1, 2, 3, 4}, y{2, 4, 6, 8}, c{5, 5, 5, 5};
    EXPECT_DOUBLE_EQ(mean(x), 2.5);
    EXPECT_NEAR(*sample_variance(x), 5.0 / 3.0, 1e-15);
    EXPECT_DOUBLE_EQ(population_variance(x), 1.25);
    EXPECT_FALSE(sample_variance(std::vector<double>{1}));
    EXPECT_NEAR(*pearson(x, y), 1.0, 1e-15);
    EXPECT_FALSE(pearson(x, c));
}

TEST(Summary, SmallSamples) {
    auto one = summarize(std::vector<double>{3});
    EXPECT_EQ(one.n, 1u);
    EXPECT_DOUBLE_EQ(*one.mean, 3.0);
    EXPECT_FALSE(one.std);
    auto none = summarize(std::vector<double>{});
    EXPECT_FALSE(none.mean);
}

TEST(MeanCi, TIntervalWiderThanNormal) {
    std::vector<double> v{1, 2, 3, 4, 5};
    auto t = t_mean_ci(v), z = mean_ci(v);
    EXPECT_LT(t.lo, z.lo);
    EXPECT_GT(t.hi, z.hi);
    EXPECT_NEAR((t.lo + t.hi) / 2, 3.0, 1e-12);
    // t_{0.975,4} = 2.776445
    EXPECT_NEAR(t.hi - 3.0, 2.776445 * std::sqrt(2.5 / 5), 1e-5);
}
