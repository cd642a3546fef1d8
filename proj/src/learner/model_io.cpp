#include <cmath>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "toxconv/errors.hpp"
#include "toxconv/learner.hpp"

namespace toxconv::learner {

namespace {

constexpr const char* kModelVersion = "toxconv-gbrt v1";

using nlohmann::json;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json metrics_json(const Metrics& m) {
    return {{"accuracy", m.accuracy}, {"auc", number_or_null(m.auc)}, {"f1", m.f1}};
}

json summary_json(const MetricSummary& s) {
    return {{"mean", number_or_null(s.mean)}, {"ci_lo", number_or_null(s.ci.lo)}, {"ci_hi", number_or_null(s.ci.hi)}};
}

}  // namespace

void save_model(std::ostream& out, const BoostedModel& m) {
    json trees = json::array();
    for (const auto& t : m.trees) {
        json nodes = json::array();
        for (const auto& n : t.nodes) {
            if (n.feature < 0) nodes.push_back({{"leaf", n.value}});
            else
                nodes.push_back({{"feature", n.feature},
                                 {"threshold", n.threshold},
                                 {"missing_left", n.missing_left},
                                 {"left", n.left},
                                 {"right", n.right}});
        }
        trees.push_back(std::move(nodes));
    }
    json medians = json::array();
    for (double v : m.medians) medians.push_back(number_or_null(v));
    json j{{"version", kModelVersion},
           {"initial", m.initial},
           {"learning_rate", m.learning_rate},
           {"n_estimators", m.n_estimators},
           {"max_depth", m.max_depth},
           {"feature_names", m.feature_names},
           {"medians", medians},
           {"trees", trees}};
    out << j.dump() << '\n';
}

BoostedModel load_model(std::istream& in) {
    if (!in) throw UnreadableInput("model stream is not readable");
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw SchemaViolation("model file is not JSON");
    if (j.value("version", "") != kModelVersion) throw SchemaViolation("unsupported model version");
    try {
        BoostedModel m;
        m.initial = j.at("initial").get<double>();
        m.learning_rate = j.at("learning_rate").get<double>();
        m.n_estimators = j.at("n_estimators").get<std::size_t>();
        m.max_depth = j.at("max_depth").get<std::size_t>();
        m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
        for (const auto& v : j.at("medians"))
            m.medians.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>());
        for (const auto& t : j.at("trees")) {
            RegressionTree tree;
            for (const auto& n : t) {
                TreeNode node;
                if (n.contains("leaf")) {
                    node.value = n.at("leaf").get<double>();
                } else {
                    node.feature = n.at("feature").get<int>();
                    node.threshold = n.at("threshold").get<double>();
                    node.missing_left = n.at("missing_left").get<bool>();
                    node.left = n.at("left").get<std::uint32_t>();
                    node.right = n.at("right").get<std::uint32_t>();
                }
                tree.nodes.push_back(node);
            }
            for (const auto& node : tree.nodes)
                if (node.feature >= 0 && (node.left >= tree.nodes.size() || node.right >= tree.nodes.size() ||
                                          static_cast<std::size_t>(node.feature) >= m.medians.size()))
                    throw SchemaViolation("tree node refers outside the model");
            m.trees.push_back(std::move(tree));
        }
        if (m.trees.size() != m.n_estimators) throw SchemaViolation("tree count does not match n_estimators");
        return m;
    } catch (const json::exception& e) {
        throw SchemaViolation(std::string("malformed model: ") + e.what());
    }
}

void write_cv_report_json(std::ostream& out, const CVReport& r) {
    json folds = json::array();
    for (const auto& f : r.folds)
        folds.push_back({{"fold", f.fold},
                         {"n_estimators", f.n_estimators},
                         {"train_size", f.train_size},
                         {"test_size", f.test_size},
                         {"metrics", metrics_json(f.metrics)},
                         {"inner_accuracy", f.inner_accuracy}});
    json j{{"seed", r.seed},
           {"grid", r.grid},
           {"folds", folds},
           {"accuracy", summary_json(r.accuracy)},
           {"auc", summary_json(r.auc)},
           {"f1", summary_json(r.f1)}};
    out << j.dump(2) << '\n';
}

void write_cv_report_csv(std::ostream& out, const CVReport& r) {
    auto num = [](double v) { return std::isfinite(v) ? json(v).dump() : std::string(); };
    out << "fold,n_estimators,train_size,test_size,accuracy,auc,f1\n";
    for (const auto& f : r.folds)
        out << f.fold << ',' << f.n_estimators << ',' << f.train_size << ',' << f.test_size << ','
            << num(f.metrics.accuracy) << ',' << num(f.metrics.auc) << ',' << num(f.metrics.f1) << '\n';
    out << "mean,,,," << num(r.accuracy.mean) << ',' << num(r.auc.mean) << ',' << num(r.f1.mean) << '\n';
    out << "ci_lo,,,," << num(r.accuracy.ci.lo) << ',' << num(r.auc.ci.lo) << ',' << num(r.f1.ci.lo) << '\n';
    out << "ci_hi,,,," << num(r.accuracy.ci.hi) << ',' << num(r.auc.ci.hi) << ',' << num(r.f1.ci.hi) << '\n';
}

}  // namespace toxconv::learner
