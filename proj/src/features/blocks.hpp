#pragma once

// Building blocks shared by the prefix and next-reply extractors.

#include <string>
#include <vector>

#include "toxconv/features.hpp"
#include "toxconv/graph.hpp"
#include "toxconv/graph_metrics.hpp"

namespace toxconv::features::detail {

enum Dist : unsigned {
    kN = 1u << 0,
    kMean = 1u << 1,
    kVar = 1u << 2,
    kStd = 1u << 3,
    kMin = 1u << 4,
    kMax = 1u << 5,
    kHidx = 1u << 6,
    kGini = 1u << 7,
    kEntropy = 1u << 8,
    kFracPos = 1u << 9,
    kQuartiles = 1u << 10,
};

// Emits `base.<stat>` for every requested statistic, in a fixed order.
// Statistics undefined for the sample size are missing.
void add_dist(FeatureVector& fv, const std::string& base, std::span<const double> values, unsigned which);

// Node attributes aligned with a graph's node ids; NaN marks unknown.
struct NodeAttributes {
    std::vector<double> followers;
    std::vector<double> friends;
    std::vector<double> alignment;
};

NodeAttributes node_attributes(const Digraph& g, const FeatureContext& ctx, Timestamp at);

// Size, degree, mixing, centralization, connectivity, clustering, community,
// component and core/truss statistics of one graph under `base.`.
void add_graph_block(FeatureVector& fv, const std::string& base, const Digraph& g, const NodeAttributes& attrs,
                     std::uint64_t seed);

void add_census_block(FeatureVector& fv, const std::string& base, const Digraph& g);

// Edge u->v kept iff present in both graphs; both must share node labels.
Digraph intersect(const Digraph& a, const Digraph& b);

// Friend list of a user at `at`, or nullptr.
const std::vector<std::string>* friends_of(const FeatureContext& ctx, const std::string& user, Timestamp at);

// n/mean/var/entropy/gini of common-friend counts and Jaccard fractions.
struct EmbeddednessSample {
    std::vector<double> count;
    std::vector<double> fraction;
    void add(const metrics::Embeddedness& e) {
        if (e.missing) return;
        count.push_back(static_cast<double>(e.count));
        fraction.push_back(e.fraction);
    }
};

void add_embeddedness(FeatureVector& fv, const std::string& base, const EmbeddednessSample& s);

std::optional<double> alignment_of(const FeatureContext& ctx, const std::string& user);

}  // namespace toxconv::features::detail
