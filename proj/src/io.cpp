#include "toxconv/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "toxconv/errors.hpp"

namespace toxconv::io {

namespace {

using nlohmann::json;

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(std::move(cur));
    return out;
}

double parse_field(const std::string& s, std::size_t line) {
    if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw SchemaViolation("line " + std::to_string(line) + ": not a number: " + s);
    return v;
}

std::string task_name(features::Task t) { return t == features::Task::Prefix ? "prefix" : "next-reply"; }

}  // namespace

std::string format_number(double v) {
    if (!std::isfinite(v)) return {};
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void write_series_csv(std::ostream& out, std::span<const analysis::BucketSeries> series) {
    out << "series,bucket,x,y,ci_lo,ci_hi,n\n";
    for (const auto& s : series)
        for (const auto& p : s.points)
            out << s.name << ',' << p.bucket << ',' << format_number(p.x) << ',' << format_number(p.y) << ','
                << format_number(p.ci.lo) << ',' << format_number(p.ci.hi) << ',' << p.n << '\n';
}

void write_feature_matrix(std::ostream& out, const std::vector<std::string>& names,
                          std::span<const std::vector<double>> rows) {
    for (std::size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << names[j];
    out << '\n';
    for (const auto& r : rows) {
        if (r.size() != names.size()) throw InvalidArgument("feature row width does not match the header");
        for (std::size_t j = 0; j < r.size(); ++j) out << (j ? "," : "") << format_number(r[j]);
        out << '\n';
    }
}

FeatureTable read_feature_matrix(std::istream& in) {
    if (!in) throw UnreadableInput("feature matrix stream is not readable");
    FeatureTable t;
    std::string line;
    if (!std::getline(in, line)) throw SchemaViolation("feature matrix has no header");
    t.names = split_csv(line);
    if (t.names.size() == 1 && t.names[0].empty()) t.names.clear();
    t.X.cols = t.names.size();
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv(line);
        if (fields.size() != t.names.size())
            throw SchemaViolation("line " + std::to_string(lineno) + ": expected " + std::to_string(t.names.size()) +
                                  " fields, found " + std::to_string(fields.size()));
        for (const auto& f : fields) t.X.data.push_back(parse_field(f, lineno));
        ++t.X.rows;
    }
    return t;
}

std::string manifest_json(const labeling::LabeledDataset& ds) {
    json buckets = json::array();
    for (const auto& b : ds.buckets)
        buckets.push_back({{"prefix_size", b.key.prefix_size},
                           {"prefix_toxic_count", b.key.prefix_toxic_count},
                           {"conversations", b.conversations},
                           {"median", b.median},
                           {"above", b.above},
                           {"below", b.below},
                           {"ties", b.ties},
                           {"kept_per_class", b.kept_per_class},
                           {"kept", b.kept}});
    std::size_t positives = 0;
    for (const auto& i : ds.instances) positives += i.label == 1;
    json j{{"task", task_name(ds.task)},
           {"catalog", ds.catalog},
           {"seed", ds.seed},
           {"instances", ds.instances.size()},
           {"positives", positives},
           {"features", ds.feature_names().size()},
           {"buckets", buckets},
           {"dropped",
            {{"clock_skew", ds.dropped_clock_skew},
             {"unscored", ds.dropped_unscored},
             {"short", ds.dropped_short},
             {"small_bucket", ds.dropped_small_bucket},
             {"ties", ds.dropped_ties},
             {"balance", ds.dropped_balance},
             {"no_pair", ds.dropped_no_pair}}}};
    if (ds.task == features::Task::Prefix) {
        j["prefix_size"] = ds.prefix_size;
        j["min_bucket"] = ds.min_bucket;
    } else {
        json pairs = json::array();
        for (const auto& p : ds.pairs)
            pairs.push_back({{"group", p.group}, {"first", p.first_post}, {"second", p.second_post},
                             {"first_toxic", p.first_toxic}});
        j["pairs"] = pairs;
    }
    return j.dump(2) + "\n";
}

void save_dataset(const labeling::LabeledDataset& ds, const std::filesystem::path& dir) {
    const auto names = ds.feature_names();
    std::vector<std::vector<double>> rows;
    rows.reserve(ds.instances.size());
    for (const auto& inst : ds.instances) {
        if (inst.features.names() != names) throw CatalogMismatch("instances disagree on feature names");
        rows.push_back(inst.features.values());
    }
    std::filesystem::create_directories(dir);
    std::ostringstream features, labels;
    write_feature_matrix(features, names, rows);
    labels << "group,label\n";
    for (const auto& inst : ds.instances) labels << inst.group << ',' << inst.label << '\n';
    write_file(dir / "features.csv", features.str());
    write_file(dir / "labels.csv", labels.str());
    write_file(dir / "manifest.json", manifest_json(ds));
}

Dataset load_dataset(const std::filesystem::path& dir) {
    Dataset d;
    {
        std::istringstream in(read_file(dir / "features.csv"));
        auto t = read_feature_matrix(in);
        d.names = std::move(t.names);
        d.X = std::move(t.X);
    }
    {
        std::istringstream in(read_file(dir / "labels.csv"));
        std::string line;
        std::getline(in, line);
        if (line.rfind("group,label", 0) != 0) throw SchemaViolation("labels.csv must start with group,label");
        std::size_t lineno = 1;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            const auto f = split_csv(line);
            if (f.size() != 2 || (f[1] != "0" && f[1] != "1"))
                throw SchemaViolation("labels.csv line " + std::to_string(lineno) + " is not group,0|1");
            d.groups.push_back(f[0]);
            d.y.push_back(f[1] == "1");
        }
    }
    if (d.y.size() != d.X.rows) throw SchemaViolation("features.csv and labels.csv differ in row count");
    const json m = json::parse(read_file(dir / "manifest.json"), nullptr, false);
    if (m.is_discarded() || !m.is_object()) throw SchemaViolation("manifest.json is not a JSON object");
    d.task = m.value("task", "");
    d.seed = m.value("seed", std::uint64_t{0});
    return d;
}

std::set<std::string> read_word_list(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    std::set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') continue;
        const auto e = line.find_last_not_of(" \t\r");
        out.insert(line.substr(b, e - b + 1));
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UnreadableInput("cannot open " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << content)) throw UnreadableInput("cannot write " + path.string());
}

}  // namespace toxconv::io
