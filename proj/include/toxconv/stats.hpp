#pragma once

#include <climits>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace toxconv::stats {

// Buckets x >= 1 by floor(log_base(x)); 0 gets its own bucket. Values in
// (0, 1) land in negative buckets.
class LogBucketer {
public:
    static constexpr int kZeroBucket = INT_MIN;

    explicit LogBucketer(double base = 2.0);
    double base() const { return base_; }
    int bucket(double x) const;
    // Smallest value in the bucket (0 for the zero bucket).
    double lower_edge(int bucket) const;
    std::string label(int bucket) const;

private:
    double base_;
};

std::size_t h_index(std::span<const double> values);
double gini(std::span<const double> values);
double entropy(std::span<const double> values);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Two-sided standard normal quantile for a confidence level, e.g. 1.96 for 0.95.
double z_value(double level);

// Wilson score interval for k successes in n trials.
Interval proportion_ci(std::size_t successes, std::size_t trials, double level = 0.95);

// Normal-approximation interval around the sample mean; degenerate for n < 2.
Interval mean_ci(std::span<const double> values, double level = 0.95);

// Two-sided Student-t interval around the mean (used for the CV summaries).
Interval t_mean_ci(std::span<const double> values, double level = 0.95);

double mean(std::span<const double> values);
// Sample variance (n - 1 denominator); nullopt for fewer than two values.
std::optional<double> sample_variance(std::span<const double> values);
double population_variance(std::span<const double> values);
// Linear interpolation between order statistics; values need not be sorted.
double quantile(std::span<const double> values, double q);
double median(std::span<const double> values);
// nullopt when either side has zero variance.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

struct Summary {
    std::size_t n = 0;
    std::optional<double> mean, std, min, max, q25, q50, q75;
};

// mean/std/min/max/quartiles; std needs n >= 2, everything else n >= 1.
Summary summarize(std::span<const double> values);

}  // namespace toxconv::stats
