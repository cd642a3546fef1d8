// Command-line driver: ingest -> score -> analyze -> features/label -> train.
//
// A corpus directory holds posts.jsonl plus optional snapshots.jsonl,
// alignment.tsv and tracked.txt; every command that reads a corpus takes
// that directory as --input. Settings resolve as flags > --config > defaults.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "toxconv/analysis.hpp"
#include "toxconv/errors.hpp"
#include "toxconv/features.hpp"
#include "toxconv/ingestion.hpp"
#include "toxconv/io.hpp"
#include "toxconv/labeling.hpp"
#include "toxconv/learner.hpp"
#include "toxconv/parallel.hpp"
#include "toxconv/synth.hpp"
#include "toxconv/toxicity.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace toxconv;

namespace {

struct Settings {
    std::uint64_t seed = 0;
    unsigned workers = default_workers();
    std::size_t prefix_size = 10;
    std::size_t min_bucket = 200;
    std::string task = "prefix";
    std::vector<std::string> feature_sets;
    std::string scorer = "stub";
    std::string lexicon;
    double threshold = kDefaultToxicityThreshold;
    std::vector<std::size_t> grid = learner::kDefaultGrid;
    std::size_t outer_folds = 10;
    std::size_t inner_folds = 5;
    std::size_t min_users = 2;
};

// Raw flag values; each is applied only if it was given on the command line.
struct Flags {
    std::string config;
    Settings v;
    std::vector<std::pair<CLI::Option*, std::string>> given;
};

template <typename T>
void read_key(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw InvalidConfig(std::string("bad value for config key ") + key);
    }
}

Settings resolve(const Flags& f) {
    Settings s;
    if (!f.config.empty()) {
        const json j = json::parse(io::read_file(f.config), nullptr, false);
        if (j.is_discarded() || !j.is_object()) throw InvalidConfig(f.config + " is not a JSON object");
        read_key(j, "seed", s.seed);
        read_key(j, "workers", s.workers);
        read_key(j, "prefix_size", s.prefix_size);
        read_key(j, "min_bucket", s.min_bucket);
        read_key(j, "task", s.task);
        read_key(j, "feature_sets", s.feature_sets);
        read_key(j, "scorer", s.scorer);
        read_key(j, "lexicon", s.lexicon);
        read_key(j, "threshold", s.threshold);
        read_key(j, "grid", s.grid);
        read_key(j, "outer_folds", s.outer_folds);
        read_key(j, "inner_folds", s.inner_folds);
        read_key(j, "min_users", s.min_users);
    }
    for (const auto& [opt, key] : f.given) {
        if (opt->count() == 0) continue;
        if (key == "seed") s.seed = f.v.seed;
        else if (key == "workers") s.workers = f.v.workers;
        else if (key == "prefix_size") s.prefix_size = f.v.prefix_size;
        else if (key == "min_bucket") s.min_bucket = f.v.min_bucket;
        else if (key == "task") s.task = f.v.task;
        else if (key == "feature_sets") s.feature_sets = f.v.feature_sets;
        else if (key == "scorer") s.scorer = f.v.scorer;
        else if (key == "lexicon") s.lexicon = f.v.lexicon;
        else if (key == "threshold") s.threshold = f.v.threshold;
        else if (key == "grid") s.grid = f.v.grid;
        else if (key == "outer_folds") s.outer_folds = f.v.outer_folds;
        else if (key == "inner_folds") s.inner_folds = f.v.inner_folds;
        else if (key == "min_users") s.min_users = f.v.min_users;
    }
    if (s.workers == 0) s.workers = 1;
    if (s.task != "prefix" && s.task != "next-reply") throw InvalidConfig("task must be prefix or next-reply");
    if (s.scorer != "stub" && s.scorer != "remote") throw InvalidConfig("scorer must be stub or remote");
    if (!(s.threshold >= 0.0 && s.threshold <= 1.0)) throw InvalidConfig("threshold must lie in [0, 1]");
    return s;
}

void add_common(CLI::App* cmd, Flags& f, std::initializer_list<std::string> keys) {
    cmd->add_option("--config", f.config, "JSON settings file")->check(CLI::ExistingFile);
    auto reg = [&](CLI::Option* o, const char* key) { f.given.emplace_back(o, key); };
    for (const auto& k : keys) {
        if (k == "seed") reg(cmd->add_option("--seed", f.v.seed, "random seed"), "seed");
        else if (k == "workers") reg(cmd->add_option("--workers", f.v.workers, "worker threads"), "workers");
        else if (k == "threshold")
            reg(cmd->add_option("--threshold", f.v.threshold, "toxicity threshold (default 0.531)"), "threshold");
        else if (k == "prefix_size")
            reg(cmd->add_option("--prefix-size,--k", f.v.prefix_size, "prefix length k"), "prefix_size");
        else if (k == "min_bucket")
            reg(cmd->add_option("--min-bucket", f.v.min_bucket, "smallest usable bucket"), "min_bucket");
        else if (k == "task")
            reg(cmd->add_option("--task", f.v.task, "prefix | next-reply")
                    ->check(CLI::IsMember({"prefix", "next-reply"})),
                "task");
        else if (k == "feature_sets")
            reg(cmd->add_option("--feature-sets", f.v.feature_sets, "comma-separated feature sets")->delimiter(','),
                "feature_sets");
        else if (k == "scorer")
            reg(cmd->add_option("--scorer", f.v.scorer, "remote | stub")->check(CLI::IsMember({"remote", "stub"})),
                "scorer");
        else if (k == "lexicon") reg(cmd->add_option("--lexicon", f.v.lexicon, "stub scorer term table"), "lexicon");
        else if (k == "grid")
            reg(cmd->add_option("--grid", f.v.grid, "n_estimators grid, comma-separated")->delimiter(','), "grid");
        else if (k == "folds") {
            reg(cmd->add_option("--outer-folds", f.v.outer_folds, "outer CV folds"), "outer_folds");
            reg(cmd->add_option("--inner-folds", f.v.inner_folds, "inner CV folds"), "inner_folds");
        } else if (k == "min_users")
            reg(cmd->add_option("--min-users", f.v.min_users, "minimum distinct participants"), "min_users");
    }
}

fs::path posts_path(const fs::path& input) { return fs::is_directory(input) ? input / "posts.jsonl" : input; }

std::vector<Post> load_posts(const fs::path& input) {
    std::istringstream in(io::read_file(posts_path(input)));
    auto r = parse_posts(in);
    if (r.malformed) std::cerr << "warning: skipped " << r.malformed << " malformed post lines\n";
    return std::move(r.posts);
}

struct CorpusDir {
    std::vector<ReplyTree> trees;
    std::optional<SnapshotStore> snapshots;
    std::optional<features::AlignmentTable> alignment;
};

CorpusDir load_corpus(const fs::path& dir) {
    CorpusDir c;
    auto linked = link_replies(load_posts(dir));
    for (auto& t : linked.trees)
        if (!t.orphan_rooted()) c.trees.push_back(std::move(t));
    if (fs::is_directory(dir) && fs::exists(dir / "snapshots.jsonl")) {
        std::istringstream in(io::read_file(dir / "snapshots.jsonl"));
        auto r = parse_snapshots(in);
        if (r.malformed) std::cerr << "warning: skipped " << r.malformed << " malformed snapshot lines\n";
        c.snapshots = std::move(r.store);
    }
    if (fs::is_directory(dir) && fs::exists(dir / "alignment.tsv")) {
        std::istringstream in(io::read_file(dir / "alignment.tsv"));
        c.alignment = features::AlignmentTable::from_stream(in);
    }
    return c;
}

void copy_side_files(const fs::path& in, const fs::path& out) {
    if (!fs::is_directory(in)) return;
    for (const char* name : {"snapshots.jsonl", "alignment.tsv", "tracked.txt"})
        if (fs::exists(in / name)) io::write_file(out / name, io::read_file(in / name));
}

void write_posts(const fs::path& path, const std::vector<Post>& posts) {
    std::ostringstream out;
    for (const auto& p : posts) write_post_line(out, p);
    io::write_file(path, out.str());
}

void write_json(const fs::path& path, const json& j) { io::write_file(path, j.dump(2) + "\n"); }

std::string series_csv(const std::vector<analysis::BucketSeries>& s) {
    std::ostringstream out;
    io::write_series_csv(out, s);
    return out.str();
}

features::FeatureCatalog catalog_for(const Settings& s) {
    return s.task == "prefix" ? features::FeatureCatalog::prefix(s.prefix_size, s.feature_sets)
                              : features::FeatureCatalog::next_reply(s.feature_sets);
}

// ---- commands ------------------------------------------------------------

void cmd_synth(const std::string& config_path, std::optional<std::uint64_t> seed,
               std::optional<std::size_t> conversations, const fs::path& output) {
    synth::GeneratorConfig cfg;
    if (!config_path.empty()) cfg = synth::config_from_json(io::read_file(config_path));
    if (seed) cfg.seed = *seed;
    if (conversations) cfg.n_conversations = *conversations;
    const auto corpus = synth::generate(cfg);
    synth::write_corpus(corpus, cfg, output);
    std::cout << "wrote " << corpus.posts.size() << " posts, " << corpus.snapshots.size() << " snapshots to "
              << output.string() << "\n";
}

void cmd_ingest(const Settings& s, const fs::path& input, const std::string& tracked_path, const fs::path& output) {
    std::istringstream in(io::read_file(posts_path(input)));
    auto parsed = parse_posts(in);
    const std::size_t n_posts = parsed.posts.size();
    CorpusFilter filter;
    filter.min_distinct_users = s.min_users;
    const fs::path tracked = !tracked_path.empty() ? fs::path(tracked_path) : input / "tracked.txt";
    filter.tracked_accounts = io::read_word_list(tracked);
    auto linked = link_replies(std::move(parsed.posts));
    const std::size_t n_trees = linked.trees.size();
    const auto kept = filter_conversations(std::move(linked.trees), filter);
    write_posts(output / "posts.jsonl", flatten_with_roots(kept));
    copy_side_files(input, output);
    if (!tracked_path.empty()) io::write_file(output / "tracked.txt", io::read_file(tracked));
    std::size_t replies = 0;
    for (const auto& t : kept) replies += t.reply_count();
    write_json(output / "ingest.json", {{"posts_read", n_posts},
                                        {"malformed", parsed.malformed},
                                        {"duplicates", parsed.duplicates},
                                        {"cycle_members", linked.cycle_members.size()},
                                        {"dropped_below_cycle", linked.dropped_below_cycle},
                                        {"orphan_rooted", linked.orphan_rooted},
                                        {"trees", n_trees},
                                        {"conversations", kept.size()},
                                        {"replies", replies},
                                        {"min_users", s.min_users}});
    std::cout << "kept " << kept.size() << " of " << n_trees << " conversations\n";
}

void cmd_score(const Settings& s, const fs::path& input, const fs::path& output, bool overwrite) {
    auto posts = load_posts(input);
    std::unique_ptr<ToxicityScorer> scorer;
    if (s.scorer == "stub") {
        if (s.lexicon.empty()) throw InvalidConfig("the stub scorer needs --lexicon");
        std::istringstream lex(io::read_file(s.lexicon));
        scorer = std::make_unique<StubScorer>(StubScorer::from_stream(lex));
    } else {
        auto cfg = RemoteScorer::config_from_env();
        if (cfg.endpoint.empty()) throw InvalidConfig("TOXCONV_SCORER_ENDPOINT is not set");
        cfg.max_in_flight = s.workers;
        scorer = std::make_unique<RemoteScorer>(cfg);
    }
    const auto r = score_posts(posts, *scorer, overwrite);
    write_posts(output / "posts.jsonl", posts);
    copy_side_files(input, output);
    write_json(output / "score.json", {{"scorer", s.scorer},
                                       {"scored", r.scored},
                                       {"missing", r.missing},
                                       {"no_text", r.no_text},
                                       {"kept", r.kept}});
    std::cout << "scored " << r.scored << " posts, " << r.missing << " failed\n";
}

json homophily_entry(const std::vector<ReplyTree>& trees, const SnapshotStore& store, analysis::HomophilyMode mode,
                     double threshold) {
    try {
        return {{"value", analysis::homophily(trees, store, mode, threshold)}};
    } catch (const Error& e) {
        return {{"value", nullptr}, {"error", e.kind()}};
    }
}

void cmd_analyze(const Settings& s, const fs::path& input, const fs::path& output) {
    using namespace analysis;
    const auto c = load_corpus(input);
    const double t = s.threshold;
    const SnapshotStore* store = c.snapshots ? &*c.snapshots : nullptr;

    auto users = user_distributions(c.trees, t);
    std::vector<BucketSeries> individual{users.tweets, users.toxic_tweets};
    try {
        individual.push_back(toxicity_contribution(c.trees, t));
    } catch (const NoToxicTweets&) {
    }
    individual.push_back(toxicity_rate_by_activity(c.trees, t));
    io::write_file(output / "individual.csv", series_csv(individual));

    const auto dyads = extract_all_dyads(c.trees, store, t, s.workers);
    std::vector<BucketSeries> dyad_series;
    for (auto cond : {DyadCondition::EdgeType, DyadCondition::InfluenceGap, DyadCondition::Embeddedness})
        for (bool parent_toxic : {true, false}) dyad_series.push_back(toxic_reply_probability(dyads, cond, parent_toxic));
    io::write_file(output / "dyads.csv", series_csv(dyad_series));

    std::vector<BucketSeries> tree;
    for (auto m : {TreeMeasure::Size, TreeMeasure::Depth, TreeMeasure::Width, TreeMeasure::Wiener})
        tree.push_back(tree_toxicity_curve(c.trees, m, t));
    io::write_file(output / "tree.csv", series_csv(tree));
    io::write_file(output / "wiener_by_size.csv", series_csv(wiener_by_size(c.trees, t)));

    std::vector<BucketSeries> follow;
    json homophily_json = nullptr;
    if (store) {
        for (auto m : {FollowMeasure::Density, FollowMeasure::Components, FollowMeasure::Modularity})
            follow.push_back(follow_graph_toxicity_curve(c.trees, *store, m, t, s.workers, s.seed));
        homophily_json = {
            {"at_least_one_toxic", homophily_entry(c.trees, *store, HomophilyMode::AtLeastOneToxic, t)},
            {"at_least_four_toxic", homophily_entry(c.trees, *store, HomophilyMode::AtLeastFourToxic, t)},
            {"toxic_fraction", homophily_entry(c.trees, *store, HomophilyMode::Numeric, t)}};
    } else {
        std::cerr << "warning: no snapshots.jsonl; follow-graph series and homophily skipped\n";
    }
    io::write_file(output / "follow_graph.csv", series_csv(follow));

    BucketSeries tts{"time_to_size", {}};
    for (std::size_t n : {5, 10, 20, 50}) {
        const auto r = time_to_size(c.trees, n);
        BucketPoint p;
        p.bucket = std::to_string(n);
        p.x = static_cast<double>(n);
        p.y = r.median.value_or(std::numeric_limits<double>::quiet_NaN());
        p.ci = {r.q25.value_or(std::numeric_limits<double>::quiet_NaN()),
                r.q75.value_or(std::numeric_limits<double>::quiet_NaN())};
        p.n = r.conversations;
        tts.points.push_back(p);
    }
    io::write_file(output / "time_to_size.csv", series_csv({tts}));
    write_json(output / "homophily.json", homophily_json);
    write_json(output / "run.json", {{"command", "analyze"},
                                     {"seed", s.seed},
                                     {"threshold", t},
                                     {"conversations", c.trees.size()},
                                     {"dyads", dyads.size()},
                                     {"snapshots", store != nullptr}});
    std::cout << "analyzed " << c.trees.size() << " conversations, " << dyads.size() << " dyads\n";
}

struct Loaded {
    CorpusDir corpus;
    features::UserAlignments alignments;
    features::FeatureContext ctx;
};

void prepare(Loaded& l, const Settings& s, const fs::path& input) {
    l.corpus = load_corpus(input);
    if (l.corpus.alignment) l.alignments = features::user_alignments(l.corpus.trees, *l.corpus.alignment);
    l.ctx.snapshots = l.corpus.snapshots ? &*l.corpus.snapshots : nullptr;
    l.ctx.alignments = l.corpus.alignment ? &l.alignments : nullptr;
    l.ctx.threshold = s.threshold;
    l.ctx.seed = s.seed;
}

void cmd_features(const Settings& s, const fs::path& input, const fs::path& output) {
    Loaded l;
    prepare(l, s, input);
    const auto catalog = catalog_for(s);
    const auto& trees = l.corpus.trees;

    // One row per eligible conversation (prefix) or per reply (next-reply).
    std::vector<std::pair<std::size_t, ReplyTree::Index>> jobs;
    for (std::size_t c = 0; c < trees.size(); ++c) {
        if (s.task == "prefix") {
            if (trees[c].reply_count() >= s.prefix_size) jobs.emplace_back(c, 0);
        } else {
            for (ReplyTree::Index i = 1; i < trees[c].size(); ++i) jobs.emplace_back(c, i);
        }
    }
    auto rows = parallel_map<features::FeatureVector>(jobs.size(), s.workers, [&](std::size_t j) {
        const auto& tree = trees[jobs[j].first];
        if (s.task == "prefix") return features::prefix_features(prefix(tree, s.prefix_size), l.ctx, catalog);
        const auto i = jobs[j].second;
        const auto& post = tree.post(i);
        const auto so_far = prefix(tree, i - 1).tree;
        return features::next_reply_features(so_far, post.author, *post.parent, post.time, l.ctx, catalog);
    });
    std::vector<std::string> names = rows.empty() ? std::vector<std::string>{} : rows.front().names();
    std::vector<std::vector<double>> values;
    std::ostringstream ids;
    ids << "group,post\n";
    for (std::size_t j = 0; j < rows.size(); ++j) {
        if (rows[j].names() != names) throw CatalogMismatch("rows disagree on feature names");
        values.push_back(rows[j].values());
        const auto& tree = trees[jobs[j].first];
        ids << tree.root().id << ',' << tree.post(jobs[j].second).id << '\n';
    }
    std::ostringstream out;
    io::write_feature_matrix(out, names, values);
    io::write_file(output / "features.csv", out.str());
    io::write_file(output / "rows.csv", ids.str());
    write_json(output / "features.json", {{"task", s.task},
                                          {"catalog", catalog.describe()},
                                          {"seed", s.seed},
                                          {"rows", rows.size()},
                                          {"features", names.size()}});
    std::cout << "wrote " << rows.size() << " rows x " << names.size() << " features\n";
}

void cmd_label(const Settings& s, const fs::path& input, const fs::path& output) {
    Loaded l;
    prepare(l, s, input);
    const auto catalog = catalog_for(s);
    const auto ds = s.task == "prefix"
                        ? labeling::prefix_label_dataset(l.corpus.trees, catalog, l.ctx, s.min_bucket, s.seed, s.workers)
                        : labeling::paired_next_reply_dataset(l.corpus.trees, catalog, l.ctx, s.seed, s.workers);
    io::save_dataset(ds, output);
    std::cout << "labeled " << ds.instances.size() << " instances\n";
}

learner::CVOptions cv_options(const Settings& s) {
    learner::CVOptions o;
    o.grid = s.grid;
    o.outer_folds = s.outer_folds;
    o.inner_folds = s.inner_folds;
    o.seed = s.seed;
    o.workers = s.workers;
    return o;
}

void cmd_train(const Settings& s, const fs::path& input, const fs::path& output) {
    const auto d = io::load_dataset(input);
    const auto opts = cv_options(s);
    const auto report = learner::nested_cv(d.X, d.y, d.groups, opts);
    std::ostringstream rj, rc, model;
    learner::write_cv_report_json(rj, report);
    learner::write_cv_report_csv(rc, report);
    io::write_file(output / "cv_report.json", rj.str());
    io::write_file(output / "cv_report.csv", rc.str());

    learner::GbrtParams p = opts.params;
    p.n_estimators = learner::select_n_estimators(d.X, d.y, d.groups, opts);
    auto m = learner::fit(d.X, d.y, p);
    m.feature_names = d.names;
    learner::save_model(model, m);
    io::write_file(output / "model.json", model.str());
    std::cout << "accuracy " << report.accuracy.mean << " [" << report.accuracy.ci.lo << ", " << report.accuracy.ci.hi
              << "], final model n_estimators " << p.n_estimators << "\n";
}

void cmd_transfer(const Settings& s, const fs::path& input, const fs::path& target, const fs::path& output) {
    const auto src = io::load_dataset(input);
    const auto tgt = io::load_dataset(target);
    if (src.names != tgt.names) throw CatalogMismatch("source and target datasets have different features");
    const auto r = learner::domain_transfer(src.X, src.y, src.groups, tgt.X, tgt.y, tgt.groups, cv_options(s));
    auto metrics = [](const learner::Metrics& m) {
        return json{{"accuracy", m.accuracy}, {"auc", std::isfinite(m.auc) ? json(m.auc) : json(nullptr)}, {"f1", m.f1}};
    };
    write_json(output / "transfer.json", {{"seed", s.seed},
                                          {"n_estimators", r.n_estimators},
                                          {"train_size", r.train_size},
                                          {"in_domain_test_size", r.in_test_size},
                                          {"cross_domain_test_size", r.cross_test_size},
                                          {"in_domain", metrics(r.in_domain)},
                                          {"cross_domain", metrics(r.cross_domain)}});
    std::cout << "in-domain accuracy " << r.in_domain.accuracy << ", cross-domain " << r.cross_domain.accuracy << "\n";
}

json csv_to_json(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    json series = json::object();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string item;
        while (std::getline(ss, item, ',')) f.push_back(item);
        while (f.size() < 7) f.emplace_back();
        auto num = [](const std::string& v) { return v.empty() ? json(nullptr) : json(std::stod(v)); };
        series[f[0]].push_back({{"bucket", f[1]}, {"x", num(f[2])}, {"y", num(f[3])}, {"ci_lo", num(f[4])},
                                {"ci_hi", num(f[5])}, {"n", std::stoull(f[6])}});
    }
    return series;
}

void cmd_report(const std::vector<fs::path>& inputs, const fs::path& output) {
    json bundle = json::object();
    const std::vector<std::pair<const char*, const char*>> sections{
        {"individual.csv", "user_activity"},     {"dyads.csv", "dyad_toxicity"},
        {"tree.csv", "tree_shape"},              {"wiener_by_size.csv", "wiener_by_size"},
        {"follow_graph.csv", "follow_graph"},    {"time_to_size.csv", "time_to_size"}};
    for (const auto& dir : inputs) {
        json entry = json::object();
        for (const auto& [file, key] : sections)
            if (fs::exists(dir / file)) entry[key] = csv_to_json(io::read_file(dir / file));
        for (const char* file : {"homophily.json", "cv_report.json", "transfer.json", "manifest.json", "run.json"})
            if (fs::exists(dir / file)) entry[fs::path(file).stem().string()] = json::parse(io::read_file(dir / file));
        if (entry.empty()) throw UnreadableInput("no analysis or training outputs in " + dir.string());
        bundle[dir.filename().empty() ? dir.parent_path().filename().string() : dir.filename().string()] = entry;
    }
    io::write_file(output, bundle.dump(2) + "\n");
    std::cout << "report covers " << inputs.size() << " directories\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"toxconv: toxicity and conversation-structure pipeline"};
    app.require_subcommand(1);

    fs::path input, output, target;
    std::vector<fs::path> report_inputs;
    std::string tracked, gen_config;
    std::uint64_t synth_seed = 0;
    std::size_t synth_n = 0;
    bool overwrite = false;
    Flags flags;

    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic corpus directory");
    synth_cmd->add_option("--config", gen_config, "generator config (JSON)")->check(CLI::ExistingFile);
    auto* synth_seed_opt = synth_cmd->add_option("--seed", synth_seed, "overrides the config seed");
    auto* synth_n_opt = synth_cmd->add_option("--conversations", synth_n, "overrides n_conversations");
    synth_cmd->add_option("--output", output, "output directory")->required();

    auto* ingest = app.add_subcommand("ingest", "link replies and keep qualifying conversations");
    ingest->add_option("--input", input, "corpus directory or posts file")->required()->check(CLI::ExistingPath);
    ingest->add_option("--tracked", tracked, "tracked accounts, one per line (default: <input>/tracked.txt)");
    ingest->add_option("--output", output, "output corpus directory")->required();
    add_common(ingest, flags, {"min_users"});

    auto* score = app.add_subcommand("score", "fill in toxicity scores");
    score->add_option("--input", input, "corpus directory")->required()->check(CLI::ExistingPath);
    score->add_option("--output", output, "output corpus directory")->required();
    score->add_flag("--overwrite", overwrite, "rescore posts that already have a score");
    add_common(score, flags, {"scorer", "lexicon", "workers"});

    auto* analyze = app.add_subcommand("analyze", "emit the analysis CSV series");
    analyze->add_option("--input", input, "corpus directory")->required()->check(CLI::ExistingDirectory);
    analyze->add_option("--output", output, "output directory")->required();
    add_common(analyze, flags, {"seed", "workers", "threshold"});

    auto* feats = app.add_subcommand("features", "write a feature matrix");
    feats->add_option("--input", input, "corpus directory")->required()->check(CLI::ExistingDirectory);
    feats->add_option("--output", output, "output directory")->required();
    add_common(feats, flags, {"seed", "workers", "threshold", "task", "prefix_size", "feature_sets"});

    auto* label = app.add_subcommand("label", "build a labeled dataset");
    label->add_option("--input", input, "corpus directory")->required()->check(CLI::ExistingDirectory);
    label->add_option("--output", output, "dataset directory")->required();
    add_common(label, flags, {"seed", "workers", "threshold", "task", "prefix_size", "min_bucket", "feature_sets"});

    auto* train = app.add_subcommand("train", "nested cross-validation and a final model");
    train->add_option("--input", input, "dataset directory")->required()->check(CLI::ExistingDirectory);
    train->add_option("--output", output, "output directory")->required();
    add_common(train, flags, {"seed", "workers", "grid", "folds", "task"});

    auto* transfer = app.add_subcommand("transfer", "train on one dataset, test on another");
    transfer->add_option("--input", input, "source dataset directory")->required()->check(CLI::ExistingDirectory);
    transfer->add_option("--target", target, "target dataset directory")->required()->check(CLI::ExistingDirectory);
    transfer->add_option("--output", output, "output directory")->required();
    add_common(transfer, flags, {"seed", "workers", "grid", "folds"});

    auto* report = app.add_subcommand("report", "bundle analysis and training outputs into one JSON file");
    report->add_option("--input", report_inputs, "directories to include")->required()->check(CLI::ExistingDirectory);
    report->add_option("--output", output, "bundle path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth_cmd->parsed()) {
            cmd_synth(gen_config, synth_seed_opt->count() ? std::optional(synth_seed) : std::nullopt,
                      synth_n_opt->count() ? std::optional(synth_n) : std::nullopt, output);
            return 0;
        }
        if (report->parsed()) {
            cmd_report(report_inputs, output);
            return 0;
        }
        const Settings s = resolve(flags);
        if (ingest->parsed()) cmd_ingest(s, input, tracked, output);
        else if (score->parsed()) cmd_score(s, input, output, overwrite);
        else if (analyze->parsed()) cmd_analyze(s, input, output);
        else if (feats->parsed()) cmd_features(s, input, output);
        else if (label->parsed()) cmd_label(s, input, output);
        else if (train->parsed()) cmd_train(s, input, output);
        else if (transfer->parsed()) cmd_transfer(s, input, target, output);
        return 0;
    } catch (const Error& e) {
        std::cerr << "error[" << e.kind() << "]: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error[Internal]: " << e.what() << "\n";
        return 3;
    }
}
