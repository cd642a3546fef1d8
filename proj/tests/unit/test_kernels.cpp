#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "toxconv/kernels.hpp"

using namespace toxconv::kernels;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

double tol(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return 1e-12 * (1.0 + s);
}

}  // namespace

TEST(Kernels, ScalarAlwaysAvailableAndFirst) {
    auto tables = available_tables();
    ASSERT_FALSE(tables.empty());
    EXPECT_EQ(tables.front()->name, "scalar");
}

TEST(Kernels, VariantsMatchScalar) {
    const auto& ref = scalar_table();
    for (const KernelTable* t : available_tables()) {
        SCOPED_TRACE(std::string(t->name));
        for (std::size_t n = 0; n <= 67; ++n) {
            auto a = random_vector(n, 2 * n + 1), b = random_vector(n, 2 * n + 2);
            double m = n ? ref.sum(a.data(), n) / n : 0.0;

            EXPECT_NEAR(t->sum(a.data(), n), ref.sum(a.data(), n), tol(a));
            EXPECT_NEAR(t->dot(a.data(), b.data(), n), ref.dot(a.data(), b.data(), n), 100 * tol(a));
            EXPECT_NEAR(t->sum_sq_dev(a.data(), n, m), ref.sum_sq_dev(a.data(), n, m), 100 * tol(a));
            EXPECT_NEAR(t->l1_dist(a.data(), b.data(), n), ref.l1_dist(a.data(), b.data(), n), tol(a) + tol(b));
            EXPECT_EQ(t->count_greater(a.data(), n, 0.5), ref.count_greater(a.data(), n, 0.5));

            auto y1 = b, y2 = b;
            t->axpy(0.37, a.data(), y1.data(), n);
            ref.axpy(0.37, a.data(), y2.data(), n);
            EXPECT_EQ(y1, y2);

            y1 = a, y2 = a;
            t->scale(-1.25, y1.data(), n);
            ref.scale(-1.25, y2.data(), n);
            EXPECT_EQ(y1, y2);

            std::vector<double> o1(n), o2(n);
            t->sub(a.data(), b.data(), o1.data(), n);
            ref.sub(a.data(), b.data(), o2.data(), n);
            EXPECT_EQ(o1, o2);
        }
    }
}

TEST(Kernels, ScalarReferenceValues) {
    const auto& k = scalar_table();
    std::vector<double> a{1, 2, 3, 4}, b{4, 3, 2, 1};
    EXPECT_DOUBLE_EQ(k.sum(a.data(), 4), 10.0);
    EXPECT_DOUBLE_EQ(k.dot(a.data(), b.data(), 4), 20.0);
    EXPECT_DOUBLE_EQ(k.sum_sq_dev(a.data(), 4, 2.5), 5.0);
    EXPECT_DOUBLE_EQ(k.l1_dist(a.data(), b.data(), 4), 8.0);
    EXPECT_EQ(k.count_greater(a.data(), 4, 2.0), 2u);
    EXPECT_EQ(k.count_greater(a.data(), 0, 2.0), 0u);
}

TEST(Kernels, SpmvMatchesDenseProduct) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::bernoulli_distribution keep(0.3);
    for (std::size_t rows : {0u, 1u, 5u, 33u}) {
        std::size_t cols = rows + 3;
        std::vector<std::vector<double>> dense(rows, std::vector<double>(cols, 0.0));
        std::vector<std::uint32_t> row_ptr{0}, col;
        std::vector<double> val;
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c)
                if (keep(rng)) {
                    dense[r][c] = u(rng);
                    col.push_back(static_cast<std::uint32_t>(c));
                    val.push_back(dense[r][c]);
                }
            row_ptr.push_back(static_cast<std::uint32_t>(col.size()));
        }
        auto x = random_vector(cols, rows + 11);
        for (const KernelTable* t : available_tables()) {
            std::vector<double> y(rows, -99.0);
            t->spmv(row_ptr.data(), col.data(), val.data(), rows, x.data(), y.data());
            for (std::size_t r = 0; r < rows; ++r) {
                double expect = 0.0;
                for (std::size_t c = 0; c < cols; ++c) expect += dense[r][c] * x[c];
                EXPECT_NEAR(y[r], expect, 1e-12) << t->name << " row " << r;
            }
        }
    }
}

TEST(Kernels, SelectSwitchesAndRejectsUnknown) {
    auto before = active().name;
    EXPECT_FALSE(select("sse9"));
    EXPECT_EQ(active().name, before);
    ASSERT_TRUE(select("scalar"));
    EXPECT_EQ(active().name, "scalar");
    for (const KernelTable* t : available_tables()) {
        ASSERT_TRUE(select(t->name));
        EXPECT_EQ(active().name, t->name);
    }
    EXPECT_TRUE(select("auto"));
}
