#include "toxconv/toxicity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "toxconv/errors.hpp"
#include "toxconv/kernels.hpp"

namespace toxconv {

Label binarize(double score, double threshold) {
    if (!(score >= 0.0 && score <= 1.0) || !(threshold >= 0.0 && threshold <= 1.0))
        throw InvalidArgument("binarize: score and threshold must lie in [0,1]");
    return score > threshold ? Label::Toxic : Label::Nontoxic;
}

double f1_at(std::span<const double> scores, std::span<const Label> gold, double threshold) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool pred = scores[i] > threshold;
        const bool pos = gold[i] == Label::Toxic;
        tp += pred && pos;
        fp += pred && !pos;
        fn += !pred && pos;
    }
    if (tp == 0) return 0.0;
    return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

ThresholdChoice tune_threshold(std::span<const double> scores, std::span<const Label> gold,
                               std::span<const double> grid) {
    if (scores.size() != gold.size()) throw InvalidArgument("tune_threshold: length mismatch");
    if (grid.empty()) throw InvalidArgument("tune_threshold: empty grid");
    const auto positives = static_cast<std::size_t>(std::count(gold.begin(), gold.end(), Label::Toxic));
    if (positives == 0 || positives == gold.size())
        throw DegenerateGold("gold labels need both classes");
    std::vector<double> sorted(grid.begin(), grid.end());
    std::sort(sorted.begin(), sorted.end());
    ThresholdChoice best{sorted.front(), -1.0};
    for (double t : sorted) {
        const double f = f1_at(scores, gold, t);
        if (f > best.f1) best = {t, f};
    }
    return best;
}

std::size_t AnnotationMatrix::labels_for(std::size_t item) const {
    std::size_t n = 0;
    for (std::size_t a = 0; a < annotators_; ++a) n += at(item, a) != kMissing;
    return n;
}

std::vector<Label> majority_vote(const AnnotationMatrix& m) {
    std::vector<Label> out;
    out.reserve(m.items());
    for (std::size_t i = 0; i < m.items(); ++i) {
        std::size_t toxic = 0, nontoxic = 0;
        for (std::size_t a = 0; a < m.annotators(); ++a) {
            const int c = m.at(i, a);
            if (c == static_cast<int>(Label::Toxic)) ++toxic;
            else if (c == static_cast<int>(Label::Nontoxic)) ++nontoxic;
            else if (c != AnnotationMatrix::kMissing) throw InvalidArgument("majority_vote expects toxic/nontoxic codes");
        }
        if (toxic + nontoxic == 0) throw InvalidArgument("item without any label");
        out.push_back(toxic > nontoxic ? Label::Toxic : Label::Nontoxic);
    }
    return out;
}

double krippendorff_alpha(const AnnotationMatrix& m) {
    // Coincidence matrix over the category codes actually used.
    std::vector<int> codes;
    for (std::size_t i = 0; i < m.items(); ++i)
        for (std::size_t a = 0; a < m.annotators(); ++a)
            if (m.at(i, a) != AnnotationMatrix::kMissing) codes.push_back(m.at(i, a));
    std::sort(codes.begin(), codes.end());
    codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
    const std::size_t c = codes.size();
    auto code_index = [&](int v) {
        return static_cast<std::size_t>(std::lower_bound(codes.begin(), codes.end(), v) - codes.begin());
    };

    std::vector<double> o(c * c, 0.0);
    std::size_t pairable = 0;
    std::vector<std::size_t> counts(c);
    for (std::size_t i = 0; i < m.items(); ++i) {
        std::fill(counts.begin(), counts.end(), 0);
        std::size_t mu = 0;
        for (std::size_t a = 0; a < m.annotators(); ++a) {
            const int v = m.at(i, a);
            if (v == AnnotationMatrix::kMissing) continue;
            ++counts[code_index(v)];
            ++mu;
        }
        if (mu < 2) continue;
        ++pairable;
        const double w = 1.0 / static_cast<double>(mu - 1);
        for (std::size_t x = 0; x < c; ++x)
            for (std::size_t y = 0; y < c; ++y) {
                const double pairs = x == y ? static_cast<double>(counts[x]) * static_cast<double>(counts[x] - (counts[x] > 0))
                                            : static_cast<double>(counts[x]) * static_cast<double>(counts[y]);
                o[x * c + y] += pairs * w;
            }
    }
    if (pairable < 2) throw InsufficientData("alpha needs at least two items with two or more labels");

    std::vector<double> nc(c, 0.0);
    for (std::size_t x = 0; x < c; ++x)
        for (std::size_t y = 0; y < c; ++y) nc[x] += o[x * c + y];
    const double n = kernels::sum(nc);

    double observed = 0.0, expected = 0.0;
    for (std::size_t x = 0; x < c; ++x)
        for (std::size_t y = 0; y < c; ++y) {
            if (x == y) continue;
            observed += o[x * c + y];
            expected += nc[x] * nc[y];
        }
    if (observed == 0.0) return 1.0;
    if (expected == 0.0) throw InsufficientData("no variation in labels");
    return 1.0 - (n - 1.0) * observed / expected;
}

StubScorer StubScorer::from_stream(std::istream& in) {
    if (!in) throw UnreadableInput("stub lexicon is not readable");
    std::map<std::string, double> weights;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw SchemaViolation("lexicon line " + std::to_string(lineno) + " has no tab");
        std::string term = line.substr(0, tab);
        std::transform(term.begin(), term.end(), term.begin(), [](unsigned char ch) { return std::tolower(ch); });
        try {
            std::size_t used = 0;
            const std::string rest = line.substr(tab + 1);
            const double w = std::stod(rest, &used);
            weights[term] = w;
        } catch (const std::exception&) {
            throw SchemaViolation("lexicon line " + std::to_string(lineno) + " has a bad weight");
        }
    }
    return StubScorer(std::move(weights));
}

double StubScorer::score(std::string_view text) const {
    double total = 0.0;
    std::string token;
    auto flush = [&] {
        if (token.empty()) return;
        if (auto it = weights_.find(token); it != weights_.end()) total += it->second;
        token.clear();
    };
    for (unsigned char ch : text) {
        if (std::isalnum(ch)) token.push_back(static_cast<char>(std::tolower(ch)));
        else flush();
    }
    flush();
    return 1.0 / (1.0 + std::exp(-total));
}

std::vector<std::optional<double>> StubScorer::score_batch(std::span<const std::string> texts) {
    std::vector<std::optional<double>> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.emplace_back(score(t));
    return out;
}

ScoreReport score_posts(std::vector<Post>& posts, ToxicityScorer& scorer, bool overwrite, std::size_t batch_size) {
    ScoreReport report;
    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < posts.size(); ++i) {
        if (posts[i].toxicity && !overwrite) {
            ++report.kept;
            continue;
        }
        if (!posts[i].text || posts[i].text->empty()) {
            ++report.no_text;
            if (overwrite) posts[i].toxicity.reset();
            continue;
        }
        todo.push_back(i);
    }
    batch_size = std::max<std::size_t>(1, batch_size);
    for (std::size_t start = 0; start < todo.size(); start += batch_size) {
        const std::size_t end = std::min(todo.size(), start + batch_size);
        std::vector<std::string> texts;
        for (std::size_t j = start; j < end; ++j) texts.push_back(*posts[todo[j]].text);
        auto scores = scorer.score_batch(texts);
        if (scores.size() != texts.size()) throw ScorerFailure("scorer returned a batch of the wrong size");
        for (std::size_t j = start; j < end; ++j) {
            auto s = scores[j - start];
            if (s && *s >= 0.0 && *s <= 1.0) {
                posts[todo[j]].toxicity = *s;
                ++report.scored;
            } else {
                posts[todo[j]].toxicity.reset();
                ++report.missing;
            }
        }
    }
    return report;
}

}  // namespace toxconv
