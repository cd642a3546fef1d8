#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "toxconv/core_model.hpp"
#include "toxconv/snapshots.hpp"
#include "toxconv/toxicity.hpp"

namespace toxconv::features {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double v) { return std::isnan(v); }

// Ordered name -> value list. Missing values are stored as NaN.
class FeatureVector {
public:
    void add(std::string name, double value);
    void add(std::string name, std::optional<double> value) { add(std::move(name), value.value_or(kMissing)); }
    void add_flag(std::string name, bool value) { add(std::move(name), value ? 1.0 : 0.0); }

    std::size_t size() const { return values_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<double>& values() const { return values_; }
    // nullopt when the name is unknown or the value is missing.
    std::optional<double> get(std::string_view name) const;
    bool has(std::string_view name) const;

    // Throws InvalidArgument if a name occurs twice.
    void check_unique() const;

private:
    std::vector<std::string> names_;
    std::vector<double> values_;
};

enum class Task { Prefix, NextReply };

class FeatureCatalog {
public:
    static const std::vector<std::string>& prefix_sets();
    static const std::vector<std::string>& next_reply_sets();

    // Empty `sets` enables every set of the task. Unknown names and k == 0
    // throw InvalidArgument. Sets are kept in canonical order.
    static FeatureCatalog prefix(std::size_t k, std::vector<std::string> sets = {});
    static FeatureCatalog next_reply(std::vector<std::string> sets = {});

    Task task() const { return task_; }
    std::size_t k() const { return k_; }
    const std::vector<std::string>& sets() const { return sets_; }
    bool has(std::string_view set) const;
    std::string describe() const;

    friend bool operator==(const FeatureCatalog&, const FeatureCatalog&) = default;

private:
    Task task_ = Task::Prefix;
    std::size_t k_ = 0;
    std::vector<std::string> sets_;
};

// URL domain -> alignment score; negative leans left.
class AlignmentTable {
public:
    AlignmentTable() = default;
    explicit AlignmentTable(std::map<std::string, double> scores);
    // `domain<TAB>score` lines; '#' starts a comment line.
    static AlignmentTable from_stream(std::istream& in);

    void set(const std::string& domain, double score);
    std::optional<double> lookup(std::string_view domain) const;
    const std::map<std::string, double, std::less<>>& scores() const { return scores_; }
    bool empty() const { return scores_.empty(); }

private:
    std::map<std::string, double, std::less<>> scores_;
};

// Mean score of the matched domains; nullopt when none match.
std::optional<double> user_alignment(std::span<const std::string> url_domains, const AlignmentTable& table);

enum class Leaning { Left, Right };
// Thresholded at zero: negative is left, anything else right.
inline Leaning leaning(double alignment) { return alignment < 0.0 ? Leaning::Left : Leaning::Right; }

using UserAlignments = std::map<std::string, double>;

// Alignment per user from every URL domain they shared in the corpus.
UserAlignments user_alignments(std::span<const ReplyTree> corpus, const AlignmentTable& table);

struct FeatureContext {
    const SnapshotStore* snapshots = nullptr;   // required by graph-derived sets
    const UserAlignments* alignments = nullptr; // null: no alignment data
    double threshold = kDefaultToxicityThreshold;
    std::uint64_t seed = 0;                     // Louvain ordering
};

// Structural and content features for a conversation prefix. Graphs are taken from the
// snapshots in effect at the last prefix post. Throws EmptyPrefix when the
// prefix has no replies and CatalogMismatch for a next-reply catalog.
FeatureVector prefix_features(const ConversationPrefix& prefix, const FeatureContext& ctx,
                              const FeatureCatalog& catalog);

// Features of a hypothetical reply by `user` to `parent_id`, given the
// conversation so far. Snapshots are read at `at`. Throws UnknownParent.
FeatureVector next_reply_features(const ReplyTree& so_far, const std::string& user, std::string_view parent_id,
                                  Timestamp at, const FeatureContext& ctx, const FeatureCatalog& catalog);

// Elementwise a - b; a missing side gives a missing result. Throws
// CatalogMismatch when the name lists differ.
FeatureVector pair_difference(const FeatureVector& a, const FeatureVector& b);

}  // namespace toxconv::features
