#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "toxconv/errors.hpp"
#include "toxconv/learner.hpp"
#include "toxconv/parallel.hpp"

namespace toxconv::learner {

namespace {

std::vector<std::string> distinct_groups(std::span<const std::string> groups) {
    std::vector<std::string> g(groups.begin(), groups.end());
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

template <typename T>
std::vector<T> pick(std::span<const T> v, std::span<const std::size_t> idx) {
    std::vector<T> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(v[i]);
    return out;
}

MetricSummary summarize_metric(const std::vector<double>& values) {
    std::vector<double> finite;
    for (double v : values)
        if (std::isfinite(v)) finite.push_back(v);
    MetricSummary s;
    if (finite.empty()) {
        s.mean = std::numeric_limits<double>::quiet_NaN();
        s.ci = {s.mean, s.mean};
        return s;
    }
    s.mean = stats::mean(finite);
    s.ci = stats::t_mean_ci(finite);
    return s;
}

}  // namespace

std::vector<std::size_t> group_folds(std::span<const std::string> groups, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw InvalidArgument("need at least two folds");
    auto uniq = distinct_groups(groups);
    if (uniq.size() < k)
        throw TooFewGroups("need at least " + std::to_string(k) + " groups, have " + std::to_string(uniq.size()));
    std::mt19937_64 rng(seed);
    std::shuffle(uniq.begin(), uniq.end(), rng);
    std::map<std::string, std::size_t> fold_of;
    for (std::size_t i = 0; i < uniq.size(); ++i) fold_of[uniq[i]] = i % k;
    std::vector<std::size_t> out;
    out.reserve(groups.size());
    for (const auto& g : groups) out.push_back(fold_of[g]);
    return out;
}

std::vector<bool> group_split(std::span<const std::string> groups, double test_fraction, std::uint64_t seed) {
    auto uniq = distinct_groups(groups);
    if (uniq.size() < 2) throw TooFewGroups("a split needs at least two groups");
    std::mt19937_64 rng(seed);
    std::shuffle(uniq.begin(), uniq.end(), rng);
    auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(uniq.size())));
    n_test = std::clamp<std::size_t>(n_test, 1, uniq.size() - 1);
    std::map<std::string, bool> test;
    for (std::size_t i = 0; i < uniq.size(); ++i) test[uniq[i]] = i < n_test;
    std::vector<bool> out;
    for (const auto& g : groups) out.push_back(test[g]);
    return out;
}

std::size_t select_n_estimators(const Matrix& X, std::span<const int> y, std::span<const std::string> groups,
                                const CVOptions& options, std::vector<double>* mean_accuracy) {
    if (options.grid.empty()) throw InvalidArgument("empty hyper-parameter grid");
    std::vector<std::size_t> grid = options.grid;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    const auto folds = group_folds(groups, options.inner_folds, options.seed);

    std::vector<double> acc(grid.size(), 0.0);
    std::size_t used = 0;
    for (std::size_t k = 0; k < options.inner_folds; ++k) {
        std::vector<std::size_t> tr, va;
        for (std::size_t i = 0; i < folds.size(); ++i) (folds[i] == k ? va : tr).push_back(i);
        const auto ytr = pick(y, tr), yva = pick(y, va);
        // A fold whose training side has one class says nothing about n.
        if (std::count(ytr.begin(), ytr.end(), 1) == 0 || std::count(ytr.begin(), ytr.end(), 0) == 0) continue;
        GbrtParams p = options.params;
        p.n_estimators = grid.back();
        const auto model = fit(X.select_rows(tr), ytr, p);
        const auto staged = staged_predict_proba(model, X.select_rows(va), grid);
        for (std::size_t g = 0; g < grid.size(); ++g) acc[g] += evaluate(yva, staged[g]).accuracy;
        ++used;
    }
    if (used == 0) throw SingleClass("every inner training fold has a single class");
    for (double& a : acc) a /= static_cast<double>(used);
    std::size_t best = 0;
    for (std::size_t g = 1; g < grid.size(); ++g)
        if (acc[g] > acc[best]) best = g;
    if (mean_accuracy) *mean_accuracy = acc;
    return grid[best];
}

CVReport nested_cv(const Matrix& X, std::span<const int> y, std::span<const std::string> groups,
                   const CVOptions& options) {
    if (X.rows != y.size() || y.size() != groups.size()) throw InvalidArgument("nested_cv: length mismatch");
    if (X.rows == 0) throw EmptyData("no rows");
    const auto folds = group_folds(groups, options.outer_folds, options.seed);

    CVReport report;
    report.seed = options.seed;
    report.grid = options.grid;
    std::sort(report.grid.begin(), report.grid.end());
    report.grid.erase(std::unique(report.grid.begin(), report.grid.end()), report.grid.end());

    report.folds = parallel_map<FoldResult>(options.outer_folds, options.workers, [&](std::size_t k) {
        std::vector<std::size_t> tr, te;
        for (std::size_t i = 0; i < folds.size(); ++i) (folds[i] == k ? te : tr).push_back(i);
        const Matrix Xtr = X.select_rows(tr);
        const auto ytr = pick(y, tr), yte = pick(y, te);
        const auto gtr = pick(groups, tr);

        CVOptions inner = options;
        inner.seed = derive_seed(options.seed, k, 1);
        FoldResult fr;
        fr.fold = k;
        fr.train_size = tr.size();
        fr.test_size = te.size();
        fr.n_estimators = select_n_estimators(Xtr, ytr, gtr, inner, &fr.inner_accuracy);
        GbrtParams p = options.params;
        p.n_estimators = fr.n_estimators;
        const auto model = fit(Xtr, ytr, p);
        fr.metrics = evaluate(yte, predict_proba(model, X.select_rows(te)));
        return fr;
    });

    std::vector<double> acc, auc_v, f1;
    for (const auto& f : report.folds) {
        acc.push_back(f.metrics.accuracy);
        auc_v.push_back(f.metrics.auc);
        f1.push_back(f.metrics.f1);
    }
    report.accuracy = summarize_metric(acc);
    report.auc = summarize_metric(auc_v);
    report.f1 = summarize_metric(f1);
    return report;
}

TransferReport domain_transfer(const Matrix& Xs, std::span<const int> ys, std::span<const std::string> gs,
                               const Matrix& Xt, std::span<const int> yt, std::span<const std::string> gt,
                               const CVOptions& options) {
    if (Xs.cols != Xt.cols) throw InvalidArgument("source and target feature counts differ");
    const auto source_test = group_split(gs, 0.2, derive_seed(options.seed, 0, 2));
    const auto target_test = group_split(gt, 0.2, derive_seed(options.seed, 0, 3));
    std::vector<std::size_t> tr, te, xte;
    for (std::size_t i = 0; i < source_test.size(); ++i) (source_test[i] ? te : tr).push_back(i);
    for (std::size_t i = 0; i < target_test.size(); ++i)
        if (target_test[i]) xte.push_back(i);

    const Matrix Xtr = Xs.select_rows(tr);
    const auto ytr = pick(ys, tr);
    TransferReport r;
    r.n_estimators = select_n_estimators(Xtr, ytr, pick(gs, tr), options);
    GbrtParams p = options.params;
    p.n_estimators = r.n_estimators;
    const auto model = fit(Xtr, ytr, p);
    r.in_domain = evaluate(pick(ys, te), predict_proba(model, Xs.select_rows(te)));
    r.cross_domain = evaluate(pick(yt, xte), predict_proba(model, Xt.select_rows(xte)));
    r.train_size = tr.size();
    r.in_test_size = te.size();
    r.cross_test_size = xte.size();
    return r;
}

}  // namespace toxconv::learner
