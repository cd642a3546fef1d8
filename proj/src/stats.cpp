#include "toxconv/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "toxconv/errors.hpp"
#include "toxconv/kernels.hpp"

namespace toxconv::stats {

LogBucketer::LogBucketer(double base) : base_(base) {
    if (!(base > 1.0) || !std::isfinite(base)) throw InvalidArgument("log bucket base must be > 1");
}

int LogBucketer::bucket(double x) const {
    if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidArgument("log bucketing needs a finite value >= 0");
    if (x == 0.0) return kZeroBucket;
    int b = static_cast<int>(std::floor(std::log(x) / std::log(base_)));
    // Correct floating error at exact powers of the base.
    while (std::pow(base_, b + 1) <= x) ++b;
    while (std::pow(base_, b) > x) --b;
    return b;
}

double LogBucketer::lower_edge(int b) const { return b == kZeroBucket ? 0.0 : std::pow(base_, b); }

std::string LogBucketer::label(int b) const { return b == kZeroBucket ? "zero" : std::to_string(b); }

std::size_t h_index(std::span<const double> values) {
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end(), std::greater<>());
    std::size_t h = 0;
    while (h < v.size() && v[h] >= static_cast<double>(h + 1)) ++h;
    return h;
}

double gini(std::span<const double> values) {
    if (values.empty()) return 0.0;
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const double total = kernels::sum(v);
    if (!(total > 0.0)) return 0.0;
    const double n = static_cast<double>(v.size());
    double weighted = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) weighted += (2.0 * static_cast<double>(i + 1) - n - 1.0) * v[i];
    return weighted / (n * total);
}

double entropy(std::span<const double> values) {
    const double total = kernels::sum(values);
    if (!(total > 0.0)) return 0.0;
    double h = 0.0;
    for (double x : values) {
        if (x <= 0.0) continue;
        const double p = x / total;
        h -= p * std::log2(p);
    }
    return h;
}

double z_value(double level) {
    if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("confidence level must be in (0,1)");
    boost::math::normal_distribution<double> nd;
    return boost::math::quantile(nd, 0.5 + level / 2.0);
}

Interval proportion_ci(std::size_t k, std::size_t n, double level) {
    if (n == 0 || k > n) throw InvalidArgument("proportion_ci needs 0 <= k <= n and n >= 1");
    const double z = z_value(level);
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    // Clamp so the interval always contains p despite rounding at the edges.
    return {std::clamp(std::min(center - half, p), 0.0, 1.0), std::clamp(std::max(center + half, p), 0.0, 1.0)};
}

double mean(std::span<const double> values) {
    if (values.empty()) throw InvalidArgument("mean of empty sample");
    return kernels::sum(values) / static_cast<double>(values.size());
}

std::optional<double> sample_variance(std::span<const double> values) {
    if (values.size() < 2) return std::nullopt;
    const double m = mean(values);
    return kernels::sum_sq_dev(values, m) / static_cast<double>(values.size() - 1);
}

double population_variance(std::span<const double> values) {
    if (values.empty()) throw InvalidArgument("variance of empty sample");
    const double m = mean(values);
    return kernels::sum_sq_dev(values, m) / static_cast<double>(values.size());
}

Interval mean_ci(std::span<const double> values, double level) {
    const double m = mean(values);
    auto var = sample_variance(values);
    if (!var) return {m, m};
    const double half = z_value(level) * std::sqrt(*var / static_cast<double>(values.size()));
    return {m - half, m + half};
}

Interval t_mean_ci(std::span<const double> values, double level) {
    const double m = mean(values);
    auto var = sample_variance(values);
    if (!var) return {m, m};
    boost::math::students_t_distribution<double> td(static_cast<double>(values.size() - 1));
    const double t = boost::math::quantile(td, 0.5 + level / 2.0);
    const double half = t * std::sqrt(*var / static_cast<double>(values.size()));
    return {m - half, m + half};
}

double quantile(std::span<const double> values, double q) {
    if (values.empty()) throw InvalidArgument("quantile of empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("quantile must be in [0,1]");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] + frac * (v[hi] - v[lo]);
}

double median(std::span<const double> values) { return quantile(values, 0.5); }

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw InvalidArgument("pearson: length mismatch");
    if (x.size() < 2) return std::nullopt;
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my);
    const double sxx = kernels::sum_sq_dev(x, mx);
    const double syy = kernels::sum_sq_dev(y, my);
    if (!(sxx > 0.0) || !(syy > 0.0)) return std::nullopt;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

Summary summarize(std::span<const double> values) {
    Summary s;
    s.n = values.size();
    if (values.empty()) return s;
    s.mean = mean(values);
    if (auto var = sample_variance(values)) s.std = std::sqrt(*var);
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    s.min = *lo;
    s.max = *hi;
    s.q25 = quantile(values, 0.25);
    s.q50 = quantile(values, 0.5);
    s.q75 = quantile(values, 0.75);
    return s;
}

}  // namespace toxconv::stats
