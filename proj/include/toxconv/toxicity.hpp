#pragma once

#include <chrono>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "toxconv/core_model.hpp"

namespace toxconv {

inline constexpr double kDefaultToxicityThreshold = 0.531;

enum class Label : std::uint8_t { Nontoxic = 0, Toxic = 1 };

// Toxic iff score > threshold (strict).
Label binarize(double score, double threshold = kDefaultToxicityThreshold);
inline bool is_toxic(double score, double threshold = kDefaultToxicityThreshold) {
    return binarize(score, threshold) == Label::Toxic;
}

double f1_at(std::span<const double> scores, std::span<const Label> gold, double threshold);

struct ThresholdChoice {
    double threshold = 0.0;
    double f1 = 0.0;
};

// Grid threshold with the highest F1 on (scores, gold); ties go to the
// smallest threshold. Throws DegenerateGold if gold has a single class.
ThresholdChoice tune_threshold(std::span<const double> scores, std::span<const Label> gold,
                               std::span<const double> grid);

// Items x annotators grid of nominal codes; kMissing marks an absent label.
class AnnotationMatrix {
public:
    static constexpr int kMissing = -1;

    AnnotationMatrix(std::size_t items, std::size_t annotators)
        : items_(items), annotators_(annotators), cells_(items * annotators, kMissing) {}

    std::size_t items() const { return items_; }
    std::size_t annotators() const { return annotators_; }
    int at(std::size_t item, std::size_t annotator) const { return cells_[item * annotators_ + annotator]; }
    void set(std::size_t item, std::size_t annotator, int code) { cells_[item * annotators_ + annotator] = code; }
    void set(std::size_t item, std::size_t annotator, Label l) { set(item, annotator, static_cast<int>(l)); }
    std::size_t labels_for(std::size_t item) const;

private:
    std::size_t items_;
    std::size_t annotators_;
    std::vector<int> cells_;
};

// Per-item modal label over toxic/nontoxic codes; exact ties go to nontoxic.
std::vector<Label> majority_vote(const AnnotationMatrix& m);

// Krippendorff's alpha for nominal data via the coincidence matrix. Items
// with fewer than two labels are not pairable and are ignored. Throws
// InsufficientData unless at least two items carry two or more labels.
double krippendorff_alpha(const AnnotationMatrix& m);

class ToxicityScorer {
public:
    virtual ~ToxicityScorer() = default;
    // One entry per text; nullopt when no score could be obtained.
    virtual std::vector<std::optional<double>> score_batch(std::span<const std::string> texts) = 0;
};

// Deterministic offline scorer: logistic(sum of weights of matched terms).
// Text is lower-cased and split on non-alphanumeric characters; each token
// occurrence that appears in the table contributes its weight.
class StubScorer final : public ToxicityScorer {
public:
    explicit StubScorer(std::map<std::string, double> weights) : weights_(std::move(weights)) {}
    // Reads `term<TAB>weight` lines; '#' starts a comment line.
    static StubScorer from_stream(std::istream& in);

    double score(std::string_view text) const;
    std::vector<std::optional<double>> score_batch(std::span<const std::string> texts) override;

private:
    std::map<std::string, double> weights_;
};

struct RemoteScorerConfig {
    std::string endpoint;   // e.g. http://host:8080/v1/score
    std::string api_key;
    int max_retries = 4;
    std::chrono::milliseconds base_backoff{100};
    std::chrono::milliseconds timeout{10000};
    unsigned max_in_flight = 4;
};

// HTTP client: POST {"text": ...} to the endpoint, expects either a bare
// number or an object with a "score" (or "toxicity") field in [0,1]. Failed
// requests are retried with exponential backoff, then reported as nullopt.
class RemoteScorer final : public ToxicityScorer {
public:
    explicit RemoteScorer(RemoteScorerConfig config);
    std::vector<std::optional<double>> score_batch(std::span<const std::string> texts) override;

    // Reads TOXCONV_SCORER_ENDPOINT and TOXCONV_SCORER_KEY.
    static RemoteScorerConfig config_from_env();

private:
    std::optional<double> score_one(const std::string& text) const;
    RemoteScorerConfig config_;
    std::string scheme_host_port_;
    std::string path_;
};

struct ScoreReport {
    std::size_t scored = 0;
    std::size_t missing = 0;   // scorer returned nothing
    std::size_t no_text = 0;   // nothing to score
    std::size_t kept = 0;      // already had a score
};

// Fills in missing toxicity scores (or all of them with overwrite) in batches.
ScoreReport score_posts(std::vector<Post>& posts, ToxicityScorer& scorer, bool overwrite = false,
                        std::size_t batch_size = 256);

}  // namespace toxconv
