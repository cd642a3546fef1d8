#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "toxconv/stats.hpp"

namespace toxconv::learner {

// Dense row-major matrix; NaN marks a missing value.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}
    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    const double* row(std::size_t r) const { return data.data() + r * cols; }
    Matrix select_rows(std::span<const std::size_t> idx) const;
    Matrix select_cols(std::span<const std::size_t> idx) const;
};

struct GbrtParams {
    std::size_t n_estimators = 100;
    double learning_rate = 0.1;
    std::size_t max_depth = 3;
    std::size_t max_bins = 255;
    std::size_t min_samples_leaf = 1;
};

struct TreeNode {
    int feature = -1;              // -1 for a leaf
    double threshold = 0.0;        // go left when x <= threshold
    bool missing_left = true;
    std::uint32_t left = 0, right = 0;
    double value = 0.0;            // leaf output (already scaled by the learning rate)
};

struct RegressionTree {
    std::vector<TreeNode> nodes;   // nodes[0] is the root
    double predict(const double* row) const;
    std::size_t depth() const;
};

struct BoostedModel {
    double initial = 0.0;          // log-odds of the training prior
    double learning_rate = 0.1;
    std::size_t n_estimators = 0;
    std::size_t max_depth = 3;
    std::vector<RegressionTree> trees;
    std::vector<double> medians;   // per feature; NaN when the column was all missing
    std::vector<std::string> feature_names;
};

// Mean logistic loss after each stage; entry 0 is the prior-only model.
struct FitTrace {
    std::vector<double> loss;
};

// Logistic-loss gradient boosting with depth-bounded regression trees.
// Missing values are imputed with training medians on entry; each split's
// missing direction follows its median. Throws EmptyData, SingleClass.
BoostedModel fit(const Matrix& X, std::span<const int> y, const GbrtParams& params = {}, FitTrace* trace = nullptr);

std::vector<double> predict_proba(const BoostedModel& model, const Matrix& X);

// Probabilities after the first `stages[j]` trees, one vector per entry.
std::vector<std::vector<double>> staged_predict_proba(const BoostedModel& model, const Matrix& X,
                                                      std::span<const std::size_t> stages);

struct Metrics {
    double accuracy = 0.0;
    double auc = std::numeric_limits<double>::quiet_NaN();  // NaN with a single class
    double f1 = 0.0;
};

// Mann-Whitney AUC with average ranks for ties. Throws SingleClass.
double auc(std::span<const int> y, std::span<const double> scores);
// Positive prediction when score > threshold.
Metrics evaluate(std::span<const int> y, std::span<const double> scores, double threshold = 0.5);

// Fold index per row. Distinct groups are shuffled with `seed` and dealt
// round-robin into k folds. Throws TooFewGroups when there are fewer than k.
std::vector<std::size_t> group_folds(std::span<const std::string> groups, std::size_t k, std::uint64_t seed);

inline const std::vector<std::size_t> kDefaultGrid{10, 25, 50, 100, 500, 1000, 2000, 3000, 5000, 10000};

struct CVOptions {
    std::vector<std::size_t> grid = kDefaultGrid;
    std::size_t outer_folds = 10;
    std::size_t inner_folds = 5;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    GbrtParams params;
};

struct FoldResult {
    std::size_t fold = 0;
    std::size_t n_estimators = 0;  // chosen by the inner loop
    std::size_t train_size = 0, test_size = 0;
    Metrics metrics;
    std::vector<double> inner_accuracy;  // mean inner accuracy per grid value
};

struct MetricSummary {
    double mean = 0.0;
    stats::Interval ci;   // Student-t, 95%
};

struct CVReport {
    std::vector<FoldResult> folds;
    MetricSummary accuracy, auc, f1;
    std::vector<std::size_t> grid;
    std::uint64_t seed = 0;
};

// Outer grouped k-fold; the inner grouped k-fold picks n_estimators by mean
// accuracy (ties go to the smaller value) before refitting on the outer
// training part. Throws TooFewGroups.
CVReport nested_cv(const Matrix& X, std::span<const int> y, std::span<const std::string> groups,
                   const CVOptions& options = {});

// Picks n_estimators on (X, y, groups) with grouped inner CV.
std::size_t select_n_estimators(const Matrix& X, std::span<const int> y, std::span<const std::string> groups,
                                const CVOptions& options, std::vector<double>* mean_accuracy = nullptr);

// Grouped split; true marks the test side. `test_fraction` of the groups,
// rounded, at least one on each side.
std::vector<bool> group_split(std::span<const std::string> groups, double test_fraction, std::uint64_t seed);

struct TransferReport {
    std::size_t n_estimators = 0;
    Metrics in_domain;       // own 20%
    Metrics cross_domain;    // other corpus's 20%
    std::size_t train_size = 0, in_test_size = 0, cross_test_size = 0;
};

// Train on 80% of the source (tuned with inner CV), evaluate on the source's
// held-out 20% and on the target's 20%. Columns must match.
TransferReport domain_transfer(const Matrix& Xs, std::span<const int> ys, std::span<const std::string> gs,
                               const Matrix& Xt, std::span<const int> yt, std::span<const std::string> gt,
                               const CVOptions& options = {});

void save_model(std::ostream& out, const BoostedModel& model);
BoostedModel load_model(std::istream& in);

void write_cv_report_json(std::ostream& out, const CVReport& report);
void write_cv_report_csv(std::ostream& out, const CVReport& report);

}  // namespace toxconv::learner
