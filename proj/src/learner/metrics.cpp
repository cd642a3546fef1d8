#include <algorithm>
#include <numeric>

#include "toxconv/errors.hpp"
#include "toxconv/learner.hpp"

namespace toxconv::learner {

double auc(std::span<const int> y, std::span<const double> scores) {
    if (y.size() != scores.size()) throw InvalidArgument("auc: length mismatch");
    const std::size_t n = y.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });
    double rank_sum = 0.0;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t t = i; t < j; ++t)
            if (y[order[t]] == 1) {
                rank_sum += avg_rank;
                ++pos;
            }
        i = j;
    }
    const std::size_t neg = n - pos;
    if (pos == 0 || neg == 0) throw SingleClass("auc needs both classes");
    const double np = static_cast<double>(pos), nn = static_cast<double>(neg);
    return (rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

Metrics evaluate(std::span<const int> y, std::span<const double> scores, double threshold) {
    if (y.size() != scores.size()) throw InvalidArgument("evaluate: length mismatch");
    if (y.empty()) throw EmptyData("nothing to evaluate");
    Metrics m;
    std::size_t correct = 0, tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const bool pred = scores[i] > threshold;
        const bool pos = y[i] == 1;
        correct += pred == pos;
        tp += pred && pos;
        fp += pred && !pos;
        fn += !pred && pos;
    }
    m.accuracy = static_cast<double>(correct) / static_cast<double>(y.size());
    m.f1 = tp == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
    try {
        m.auc = auc(y, scores);
    } catch (const SingleClass&) {
    }
    return m;
}

}  // namespace toxconv::learner
