#include <algorithm>
#include <unordered_set>

#include "toxconv/errors.hpp"
#include "toxconv/features.hpp"

namespace toxconv::features {

void FeatureVector::add(std::string name, double value) {
    names_.push_back(std::move(name));
    values_.push_back(std::isfinite(value) ? value : kMissing);
}

std::optional<double> FeatureVector::get(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return is_missing(values_[i]) ? std::nullopt : std::optional<double>(values_[i]);
    return std::nullopt;
}

bool FeatureVector::has(std::string_view name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

void FeatureVector::check_unique() const {
    std::unordered_set<std::string_view> seen;
    for (const auto& n : names_)
        if (!seen.insert(n).second) throw InvalidArgument("duplicate feature name: " + n);
}

const std::vector<std::string>& FeatureCatalog::prefix_sets() {
    static const std::vector<std::string> sets{"content_toxicity", "reply_tree", "follow_graph", "reply_graph",
                                               "subgraphs",        "embeddedness", "political", "arrival", "rate"};
    return sets;
}

const std::vector<std::string>& FeatureCatalog::next_reply_sets() {
    static const std::vector<std::string> sets{
        "conversation_state", "user_parent",          "user_root",          "follow_graph", "reply_graph",
        "reply_tree",         "overall_embeddedness", "toxic_embeddedness", "political",    "user_info"};
    return sets;
}

namespace {

std::vector<std::string> canonical(const std::vector<std::string>& all, std::vector<std::string> wanted) {
    if (wanted.empty()) return all;
    for (const auto& w : wanted)
        if (std::find(all.begin(), all.end(), w) == all.end()) throw InvalidArgument("unknown feature set: " + w);
    std::vector<std::string> out;
    for (const auto& s : all)
        if (std::find(wanted.begin(), wanted.end(), s) != wanted.end()) out.push_back(s);
    return out;
}

}  // namespace

FeatureCatalog FeatureCatalog::prefix(std::size_t k, std::vector<std::string> sets) {
    if (k == 0) throw InvalidArgument("prefix size must be at least 1");
    FeatureCatalog c;
    c.task_ = Task::Prefix;
    c.k_ = k;
    c.sets_ = canonical(prefix_sets(), std::move(sets));
    return c;
}

FeatureCatalog FeatureCatalog::next_reply(std::vector<std::string> sets) {
    FeatureCatalog c;
    c.task_ = Task::NextReply;
    c.sets_ = canonical(next_reply_sets(), std::move(sets));
    return c;
}

bool FeatureCatalog::has(std::string_view set) const {
    return std::find(sets_.begin(), sets_.end(), set) != sets_.end();
}

std::string FeatureCatalog::describe() const {
    std::string s = task_ == Task::Prefix ? "prefix k=" + std::to_string(k_) : std::string("next-reply");
    s += " sets=";
    for (std::size_t i = 0; i < sets_.size(); ++i) s += (i ? "," : "") + sets_[i];
    return s;
}

AlignmentTable::AlignmentTable(std::map<std::string, double> scores) {
    for (const auto& [d, v] : scores) set(d, v);
}

void AlignmentTable::set(const std::string& domain, double score) {
    if (!std::isfinite(score)) throw InvalidArgument("alignment score must be finite: " + domain);
    scores_[domain] = score;
}

AlignmentTable AlignmentTable::from_stream(std::istream& in) {
    if (!in) throw UnreadableInput("alignment table is not readable");
    AlignmentTable t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw SchemaViolation("alignment line " + std::to_string(lineno) + " has no tab");
        try {
            t.set(line.substr(0, tab), std::stod(line.substr(tab + 1)));
        } catch (const std::invalid_argument&) {
            throw SchemaViolation("alignment line " + std::to_string(lineno) + " has a bad score");
        } catch (const std::out_of_range&) {
            throw SchemaViolation("alignment line " + std::to_string(lineno) + " has a bad score");
        }
    }
    return t;
}

std::optional<double> AlignmentTable::lookup(std::string_view domain) const {
    auto it = scores_.find(domain);
    if (it == scores_.end()) return std::nullopt;
    return it->second;
}

std::optional<double> user_alignment(std::span<const std::string> url_domains, const AlignmentTable& table) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& d : url_domains)
        if (auto s = table.lookup(d)) {
            sum += *s;
            ++n;
        }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

UserAlignments user_alignments(std::span<const ReplyTree> corpus, const AlignmentTable& table) {
    std::map<std::string, std::vector<std::string>> shared;
    for (const auto& tree : corpus)
        for (const auto& p : tree.posts()) {
            auto& v = shared[p.author];
            v.insert(v.end(), p.url_domains.begin(), p.url_domains.end());
        }
    UserAlignments out;
    for (const auto& [user, domains] : shared)
        if (auto a = user_alignment(domains, table)) out.emplace(user, *a);
    return out;
}

FeatureVector pair_difference(const FeatureVector& a, const FeatureVector& b) {
    if (a.names() != b.names()) throw CatalogMismatch("feature vectors come from different catalogs");
    FeatureVector out;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double x = a.values()[i], y = b.values()[i];
        out.add(a.names()[i], is_missing(x) || is_missing(y) ? kMissing : x - y);
    }
    return out;
}

}  // namespace toxconv::features
