#include <algorithm>
#include <cmath>
#include <numeric>

#include "toxconv/errors.hpp"
#include "toxconv/kernels.hpp"
#include "toxconv/learner.hpp"

namespace toxconv::learner {

Matrix Matrix::select_rows(std::span<const std::size_t> idx) const {
    Matrix m(idx.size(), cols);
    for (std::size_t i = 0; i < idx.size(); ++i) std::copy_n(row(idx[i]), cols, m.data.begin() + i * cols);
    return m;
}

Matrix Matrix::select_cols(std::span<const std::size_t> idx) const {
    Matrix m(rows, idx.size());
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t j = 0; j < idx.size(); ++j) m.at(r, j) = at(r, idx[j]);
    return m;
}

double RegressionTree::predict(const double* row) const {
    std::uint32_t i = 0;
    while (nodes[i].feature >= 0) {
        const TreeNode& n = nodes[i];
        const double x = row[n.feature];
        const bool left = std::isnan(x) ? n.missing_left : x <= n.threshold;
        i = left ? n.left : n.right;
    }
    return nodes[i].value;
}

std::size_t RegressionTree::depth() const {
    std::vector<std::size_t> d(nodes.size(), 0);
    std::size_t best = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        best = std::max(best, d[i]);
        if (nodes[i].feature >= 0) d[nodes[i].left] = d[nodes[i].right] = d[i] + 1;
    }
    return best;
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sample_loss(int y, double f) { return softplus(y == 1 ? -f : f); }

double mean_loss(std::span<const int> y, std::span<const double> f) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += sample_loss(y[i], f[i]);
    return s / static_cast<double>(y.size());
}

// Feature values mapped to small integer bins. Cut points are actual
// training values chosen by rank, so any strictly increasing transform of a
// column yields the same bins.
struct Binned {
    std::size_t n = 0;
    std::vector<std::vector<double>> cuts;     // split candidates: x <= cuts[f][b]
    std::vector<std::uint8_t> bins;            // column-major, n per feature
    std::vector<std::size_t> active;           // features with at least one cut
    std::vector<std::size_t> offset;           // histogram offset per feature

    std::uint8_t bin(std::size_t f, std::size_t i) const { return bins[f * n + i]; }
};

Binned make_bins(const std::vector<std::vector<double>>& columns, std::size_t n, std::size_t max_bins) {
    max_bins = std::clamp<std::size_t>(max_bins, 2, 255);
    Binned b;
    b.n = n;
    b.cuts.resize(columns.size());
    b.bins.assign(columns.size() * n, 0);
    b.offset.assign(columns.size(), 0);
    std::size_t total = 0;
    for (std::size_t f = 0; f < columns.size(); ++f) {
        std::vector<double> sorted = columns[f];
        std::sort(sorted.begin(), sorted.end());
        std::vector<double> uniq = sorted;
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        auto& cuts = b.cuts[f];
        if (uniq.size() <= max_bins) {
            cuts.assign(uniq.begin(), uniq.end());
        } else {
            for (std::size_t j = 1; j < max_bins; ++j) cuts.push_back(sorted[j * n / max_bins]);
            cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        }
        // The largest value can never be a useful threshold.
        while (!cuts.empty() && cuts.back() >= uniq.back()) cuts.pop_back();
        if (cuts.empty()) continue;
        b.active.push_back(f);
        b.offset[f] = total;
        total += cuts.size() + 1;
        for (std::size_t i = 0; i < n; ++i) {
            const auto pos = std::lower_bound(cuts.begin(), cuts.end(), columns[f][i]) - cuts.begin();
            b.bins[f * n + i] = static_cast<std::uint8_t>(pos);
        }
    }
    b.offset.push_back(total);
    return b;
}

// (sum of residuals, count) per bin of every active feature.
struct Histogram {
    std::vector<double> sum;
    std::vector<double> count;
};

class TreeBuilder {
public:
    TreeBuilder(const Binned& bins, const GbrtParams& params, std::span<const double> residual)
        : bins_(bins), params_(params), r_(residual) {}

    struct Leaf {
        std::uint32_t node;
        std::vector<std::uint32_t> samples;
    };

    RegressionTree grow(std::vector<std::uint32_t> all, std::vector<Leaf>& leaves) {
        RegressionTree tree;
        tree.nodes.emplace_back();
        Histogram h = build(all);
        split(tree, 0, std::move(all), std::move(h), 0, leaves);
        return tree;
    }

private:
    Histogram build(const std::vector<std::uint32_t>& samples) const {
        const std::size_t total = bins_.offset.back();
        Histogram h{std::vector<double>(total, 0.0), std::vector<double>(total, 0.0)};
        for (std::size_t f : bins_.active) {
            double* s = h.sum.data() + bins_.offset[f];
            double* c = h.count.data() + bins_.offset[f];
            const std::uint8_t* col = bins_.bins.data() + f * bins_.n;
            for (auto i : samples) {
                s[col[i]] += r_[i];
                c[col[i]] += 1.0;
            }
        }
        return h;
    }

    void split(RegressionTree& tree, std::uint32_t node, std::vector<std::uint32_t> samples, Histogram hist,
               std::size_t depth, std::vector<Leaf>& leaves) {
        const double n = static_cast<double>(samples.size());
        const double min_leaf = static_cast<double>(std::max<std::size_t>(1, params_.min_samples_leaf));
        int best_f = -1;
        std::size_t best_b = 0;
        double best_gain = 1e-12;
        if (depth < params_.max_depth && n >= 2 * min_leaf) {
            double total = 0.0;
            for (auto i : samples) total += r_[i];
            const double parent_score = total * total / n;
            for (std::size_t f : bins_.active) {
                const double* s = hist.sum.data() + bins_.offset[f];
                const double* c = hist.count.data() + bins_.offset[f];
                const std::size_t nb = bins_.cuts[f].size();
                double ls = 0.0, lc = 0.0;
                for (std::size_t b = 0; b < nb; ++b) {
                    ls += s[b];
                    lc += c[b];
                    const double rc = n - lc;
                    if (lc < min_leaf) continue;
                    if (rc < min_leaf) break;
                    const double rs = total - ls;
                    const double gain = ls * ls / lc + rs * rs / rc - parent_score;
                    if (gain > best_gain) {
                        best_gain = gain;
                        best_f = static_cast<int>(f);
                        best_b = b;
                    }
                }
            }
        }
        if (best_f < 0) {
            leaves.push_back({node, std::move(samples)});
            return;
        }

        std::vector<std::uint32_t> left, right;
        const auto f = static_cast<std::size_t>(best_f);
        for (auto i : samples) (bins_.bin(f, i) <= best_b ? left : right).push_back(i);
        samples.clear();
        samples.shrink_to_fit();

        // Build the smaller child's histogram; the sibling is the difference.
        const bool left_small = left.size() <= right.size();
        Histogram small = build(left_small ? left : right);
        Histogram large{std::move(hist.sum), std::move(hist.count)};
        kernels::sub(large.sum, small.sum, large.sum);
        kernels::sub(large.count, small.count, large.count);

        const auto li = static_cast<std::uint32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        TreeNode& nd = tree.nodes[node];
        nd.feature = best_f;
        nd.threshold = bins_.cuts[f][best_b];
        nd.left = li;
        nd.right = li + 1;
        if (left_small) {
            split(tree, li, std::move(left), std::move(small), depth + 1, leaves);
            split(tree, li + 1, std::move(right), std::move(large), depth + 1, leaves);
        } else {
            split(tree, li, std::move(left), std::move(large), depth + 1, leaves);
            split(tree, li + 1, std::move(right), std::move(small), depth + 1, leaves);
        }
    }

    const Binned& bins_;
    const GbrtParams& params_;
    std::span<const double> r_;
};

}  // namespace

BoostedModel fit(const Matrix& X, std::span<const int> y, const GbrtParams& params, FitTrace* trace) {
    if (X.rows == 0) throw EmptyData("no training rows");
    if (y.size() != X.rows) throw InvalidArgument("label count does not match rows");
    if (!(params.learning_rate > 0.0)) throw InvalidArgument("learning rate must be positive");
    std::size_t pos = 0;
    for (int v : y) {
        if (v != 0 && v != 1) throw InvalidArgument("labels must be 0 or 1");
        pos += v;
    }
    if (pos == 0 || pos == y.size()) throw SingleClass("training labels contain a single class");

    const std::size_t n = X.rows, d = X.cols;
    BoostedModel model;
    model.learning_rate = params.learning_rate;
    model.max_depth = params.max_depth;
    model.medians.assign(d, std::numeric_limits<double>::quiet_NaN());

    std::vector<std::vector<double>> columns(d, std::vector<double>(n));
    for (std::size_t f = 0; f < d; ++f) {
        std::vector<double> present;
        for (std::size_t i = 0; i < n; ++i)
            if (!std::isnan(X.at(i, f))) present.push_back(X.at(i, f));
        if (!present.empty()) model.medians[f] = stats::median(present);
        const double fill = present.empty() ? 0.0 : model.medians[f];
        for (std::size_t i = 0; i < n; ++i) columns[f][i] = std::isnan(X.at(i, f)) ? fill : X.at(i, f);
    }
    const Binned bins = make_bins(columns, n, params.max_bins);
    columns.clear();

    const double prior = static_cast<double>(pos) / static_cast<double>(n);
    model.initial = std::log(prior / (1.0 - prior));

    std::vector<double> F(n, model.initial), p(n), yd(n), r(n);
    for (std::size_t i = 0; i < n; ++i) yd[i] = y[i];
    if (trace) trace->loss = {mean_loss(y, F)};

    std::vector<std::uint32_t> all(n);
    std::iota(all.begin(), all.end(), 0u);
    for (std::size_t stage = 0; stage < params.n_estimators; ++stage) {
        for (std::size_t i = 0; i < n; ++i) p[i] = sigmoid(F[i]);
        kernels::sub(yd, p, r);

        TreeBuilder builder(bins, params, r);
        std::vector<TreeBuilder::Leaf> leaves;
        RegressionTree tree = builder.grow(all, leaves);

        for (auto& leaf : leaves) {
            double g = 0.0, h = 0.0, before = 0.0;
            for (auto i : leaf.samples) {
                g += r[i];
                h += p[i] * (1.0 - p[i]);
                before += sample_loss(y[i], F[i]);
            }
            double step = h > 1e-12 ? params.learning_rate * g / h : 0.0;
            // Halve the step until this leaf's loss does not go up.
            for (int tries = 0; step != 0.0; ++tries) {
                double after = 0.0;
                for (auto i : leaf.samples) after += sample_loss(y[i], F[i] + step);
                if (after <= before) break;
                step = tries < 40 ? step * 0.5 : 0.0;
            }
            tree.nodes[leaf.node].value = step;
            for (auto i : leaf.samples) F[i] += step;
        }
        for (auto& nd : tree.nodes)
            if (nd.feature >= 0) nd.missing_left = model.medians[nd.feature] <= nd.threshold;
        model.trees.push_back(std::move(tree));
        if (trace) trace->loss.push_back(mean_loss(y, F));
    }
    model.n_estimators = model.trees.size();
    return model;
}

std::vector<std::vector<double>> staged_predict_proba(const BoostedModel& model, const Matrix& X,
                                                      std::span<const std::size_t> stages) {
    for (auto s : stages)
        if (s > model.trees.size()) throw InvalidArgument("stage beyond the fitted number of trees");
    if (X.cols != model.medians.size()) throw InvalidArgument("column count does not match the model");
    std::vector<std::size_t> order(stages.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return stages[a] < stages[b]; });

    std::vector<std::vector<double>> out(stages.size(), std::vector<double>(X.rows));
    std::vector<double> raw(X.rows, model.initial);
    std::size_t done = 0;
    for (auto j : order) {
        for (; done < stages[j]; ++done) {
            const auto& tree = model.trees[done];
            for (std::size_t i = 0; i < X.rows; ++i) raw[i] += tree.predict(X.row(i));
        }
        for (std::size_t i = 0; i < X.rows; ++i) out[j][i] = sigmoid(raw[i]);
    }
    return out;
}

std::vector<double> predict_proba(const BoostedModel& model, const Matrix& X) {
    const std::size_t all = model.trees.size();
    return std::move(staged_predict_proba(model, X, std::span<const std::size_t>(&all, 1)).front());
}

}  // namespace toxconv::learner
