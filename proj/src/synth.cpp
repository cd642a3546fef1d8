#include "toxconv/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include <json.hpp>

#include "toxconv/errors.hpp"
#include "toxconv/ingestion.hpp"
#include "toxconv/parallel.hpp"
#include "toxconv/toxicity.hpp"

namespace toxconv::synth {

namespace {

using nlohmann::json;

constexpr std::array<const char*, 4> kEdgeKeys{"mutual", "child_follows_parent", "parent_follows_child", "none"};
constexpr std::int64_t kEpoch = 1'600'000'000;

double shift(double p, double delta) {
    if (delta == 0.0) return p;
    return 1.0 / (1.0 + std::exp(-(std::log(p / (1.0 - p)) + delta)));
}

std::string fmt(const char* pattern, std::size_t a, std::size_t b = 0) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

struct World {
    std::vector<std::string> names;
    std::vector<std::size_t> community;
    std::vector<std::vector<std::uint32_t>> friends;   // sorted indices
    std::vector<std::int64_t> followers;
    std::vector<std::vector<std::uint32_t>> members;   // non-outlet users per community
    std::vector<std::string> domains;                  // per community
};

World build_world(const GeneratorConfig& c) {
    World w;
    const std::size_t n = c.n_users;
    w.names.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        w.names[i] = i < c.n_outlets ? fmt("outlet%03zu", i) : fmt("user%05zu", i - c.n_outlets);
    w.community.resize(n);
    w.members.resize(c.n_communities);
    for (std::size_t i = 0; i < n; ++i) {
        w.community[i] = i % c.n_communities;
        if (i >= c.n_outlets) w.members[w.community[i]].push_back(static_cast<std::uint32_t>(i));
    }
    for (std::size_t k = 0; k < c.n_communities; ++k) w.domains.push_back(fmt("news%02zu.example", k));

    std::mt19937_64 rng(derive_seed(c.seed, 0, 1));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    w.friends.assign(n, {});
    std::vector<std::int64_t> in_degree(n, 0);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) {
            if (u == v) continue;
            const double p = w.community[u] == w.community[v] ? c.p_in : c.p_out;
            if (unif(rng) < p) {
                w.friends[u].push_back(static_cast<std::uint32_t>(v));
                ++in_degree[v];
            }
        }
    std::lognormal_distribution<double> extra(c.follower_mu, c.follower_sigma);
    w.followers.resize(n);
    for (std::size_t u = 0; u < n; ++u)
        w.followers[u] = in_degree[u] + static_cast<std::int64_t>(std::floor(extra(rng)));
    return w;
}

std::size_t common_friends(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    std::size_t i = 0, j = 0, n = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) ++i;
        else if (b[j] < a[i]) ++j;
        else ++n, ++i, ++j;
    }
    return n;
}

bool follows(const World& w, std::uint32_t u, std::uint32_t v) {
    return std::binary_search(w.friends[u].begin(), w.friends[u].end(), v);
}

struct Conversation {
    std::vector<Post> posts;
    double z_s = 0.0, z_c = 0.0;
};

double draw_score(bool toxic, double tilt, std::mt19937_64& rng) {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const double t = kDefaultToxicityThreshold;
    // Toxic scores land in (t, 1], the rest in [0, t); tilt < 1 pushes both up.
    return toxic ? t + (1.0 - t) * std::pow(1.0 - u, tilt) : t * std::pow(u, tilt);
}

Post make_post(const World& w, std::string id, std::uint32_t author, std::int64_t time, bool toxic, double tilt,
               double url_prob, std::mt19937_64& rng) {
    Post p;
    p.id = std::move(id);
    p.author = w.names[author];
    p.time = time;
    p.toxicity = draw_score(toxic, tilt, rng);
    p.text = toxic ? "you are awful" : "thanks for sharing";
    if (std::bernoulli_distribution(url_prob)(rng)) p.url_domains.push_back(w.domains[w.community[author]]);
    return p;
}

Conversation grow(const GeneratorConfig& c, const World& w, std::size_t index) {
    std::mt19937_64 rng(derive_seed(c.seed, index + 1, 2));
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Conversation conv;
    conv.z_s = normal(rng);
    conv.z_c = normal(rng);

    const double s = c.structure_shape * conv.z_s;
    const double cohesion = shift(c.cohesion, s);
    const double back_and_forth = shift(c.back_and_forth, s);
    const double recency = c.recency_weight * std::exp(s);
    const double root_weight = c.root_weight * std::exp(-s);
    const double latent_logit = c.structure_effect * conv.z_s + c.content_effect * conv.z_c;
    const double tilt = std::exp(-c.content_score_shift * conv.z_c);

    const std::size_t home = std::uniform_int_distribution<std::size_t>(0, c.n_communities - 1)(rng);
    const auto outlet = static_cast<std::uint32_t>(std::uniform_int_distribution<std::size_t>(0, c.n_outlets - 1)(rng));
    const double extra = std::floor(std::lognormal_distribution<double>(c.size_mu, c.size_sigma)(rng));
    const std::size_t replies =
        std::min(c.max_replies, c.min_replies + static_cast<std::size_t>(std::min(extra, 1e6)));

    std::vector<std::uint32_t> author{outlet};
    std::vector<std::size_t> parent{0};
    std::vector<bool> toxic{unif(rng) < shift(c.root_toxic_prob, latent_logit)};
    std::vector<std::uint32_t> present{outlet};
    std::int64_t time = kEpoch + static_cast<std::int64_t>(index) * 3600;
    const std::string root_id = fmt("c%06zu_%04zu", index, 0);
    conv.posts.push_back(make_post(w, root_id, outlet, time, toxic[0], tilt, c.url_prob, rng));

    std::exponential_distribution<double> gap(1.0 / c.mean_gap_seconds);
    const std::size_t n_regular = w.names.size() - c.n_outlets;
    std::vector<double> weights;
    for (std::size_t j = 1; j <= replies; ++j) {
        weights.assign(j, 0.0);
        weights[0] = root_weight;
        for (std::size_t i = 1; i < j; ++i) weights[i] = 1.0 + recency * std::pow(0.5, static_cast<double>(j - 1 - i));
        const std::size_t par = std::discrete_distribution<std::size_t>(weights.begin(), weights.end())(rng);

        std::uint32_t who;
        if (par != 0 && unif(rng) < back_and_forth) {
            who = author[parent[par]];
        } else if (j > 1 && unif(rng) < c.reuse_prob) {
            who = present[std::uniform_int_distribution<std::size_t>(0, present.size() - 1)(rng)];
        } else if (unif(rng) < cohesion && !w.members[home].empty()) {
            const auto& m = w.members[home];
            who = m[std::uniform_int_distribution<std::size_t>(0, m.size() - 1)(rng)];
        } else {
            who = static_cast<std::uint32_t>(c.n_outlets +
                                             std::uniform_int_distribution<std::size_t>(0, n_regular - 1)(rng));
        }
        if (std::find(present.begin(), present.end(), who) == present.end()) present.push_back(who);

        const std::uint32_t pa = author[par];
        std::size_t edge = 3;
        if (who != pa) {
            const bool cf = follows(w, who, pa), pf = follows(w, pa, who);
            edge = cf && pf ? 0 : cf ? 1 : pf ? 2 : 3;
        }
        double delta = latent_logit;
        if (!c.embeddedness_logit.empty()) {
            const auto bin = static_cast<std::size_t>(
                std::floor(std::log2(1.0 + static_cast<double>(common_friends(w.friends[who], w.friends[pa])))));
            delta += c.embeddedness_logit[std::min(bin, c.embeddedness_logit.size() - 1)];
        }
        const bool tox = unif(rng) < shift(c.planted[toxic[par] ? 1 : 0][edge], delta);

        time += 1 + static_cast<std::int64_t>(std::floor(gap(rng)));
        Post p = make_post(w, fmt("c%06zu_%04zu", index, j), who, time, tox, tilt, c.url_prob, rng);
        p.parent = conv.posts[par].id;
        p.root = root_id;
        p.mentions.push_back(w.names[pa]);
        conv.posts.push_back(std::move(p));
        author.push_back(who);
        parent.push_back(par);
        toxic.push_back(tox);
    }
    return conv;
}

void inject_violations(const GeneratorConfig& c, const World& w, std::vector<Post>& posts) {
    std::mt19937_64 rng(derive_seed(c.seed, 0, 3));
    const std::size_t n_regular = w.names.size() - c.n_outlets;
    auto regular = [&] {
        return static_cast<std::uint32_t>(c.n_outlets + std::uniform_int_distribution<std::size_t>(0, n_regular - 1)(rng));
    };
    std::int64_t time = kEpoch - 1'000'000;
    for (std::size_t k = 0; k < c.orphan_replies; ++k) {
        Post p = make_post(w, fmt("orphan_%04zu", k), regular(), ++time, false, 1.0, 0.0, rng);
        p.parent = fmt("missing_%04zu", k);
        posts.push_back(std::move(p));
    }
    for (std::size_t k = 0; k < c.untracked_roots; ++k) {
        const std::uint32_t root_author = regular();
        const std::string root = fmt("untracked_%04zu_%zu", k, 0);
        posts.push_back(make_post(w, root, root_author, ++time, false, 1.0, 0.0, rng));
        for (std::size_t j = 1; j <= 2; ++j) {
            std::uint32_t who = regular();
            while (who == root_author) who = regular();
            Post p = make_post(w, fmt("untracked_%04zu_%zu", k, j), who, ++time, false, 1.0, 0.0, rng);
            p.parent = root;
            p.root = root;
            posts.push_back(std::move(p));
        }
    }
    for (std::size_t k = 0; k < c.solo_conversations; ++k) {
        const auto outlet = static_cast<std::uint32_t>(k % c.n_outlets);
        const std::string root = fmt("solo_%04zu_%zu", k, 0);
        posts.push_back(make_post(w, root, outlet, ++time, false, 1.0, 0.0, rng));
        Post p = make_post(w, fmt("solo_%04zu_%zu", k, 1), outlet, ++time, false, 1.0, 0.0, rng);
        p.parent = root;
        p.root = root;
        posts.push_back(std::move(p));
    }
}

template <typename T>
void read_field(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw InvalidConfig(std::string("bad value for ") + key);
    }
}

void check_prob(double p, const std::string& name) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidConfig(name + " must be a probability in [0, 1]");
}

void check_nonneg(double v, const std::string& name) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidConfig(name + " must be finite and non-negative");
}

}  // namespace

void validate(const GeneratorConfig& c) {
    for (auto [p, name] : {std::pair{c.p_in, "p_in"}, {c.p_out, "p_out"}, {c.reuse_prob, "reuse_prob"},
                           {c.cohesion, "cohesion"}, {c.back_and_forth, "back_and_forth"},
                           {c.root_toxic_prob, "root_toxic_prob"}, {c.url_prob, "url_prob"}})
        check_prob(p, name);
    for (std::size_t t = 0; t < 2; ++t)
        for (std::size_t e = 0; e < 4; ++e) check_prob(c.planted[t][e], std::string("planted.") + kEdgeKeys[e]);
    for (auto [v, name] : {std::pair{c.root_weight, "root_weight"}, {c.recency_weight, "recency_weight"},
                           {c.follower_sigma, "follower_sigma"}, {c.size_sigma, "size_sigma"}})
        check_nonneg(v, name);
    for (auto [v, name] : {std::pair{c.follower_mu, "follower_mu"}, {c.size_mu, "size_mu"},
                           {c.structure_effect, "structure_effect"}, {c.structure_shape, "structure_shape"},
                           {c.content_effect, "content_effect"}, {c.content_score_shift, "content_score_shift"}})
        if (!std::isfinite(v)) throw InvalidConfig(std::string(name) + " must be finite");
    for (double v : c.embeddedness_logit)
        if (!std::isfinite(v)) throw InvalidConfig("embeddedness_logit entries must be finite");
    if (!(c.mean_gap_seconds > 0.0) || !std::isfinite(c.mean_gap_seconds))
        throw InvalidConfig("mean_gap_seconds must be positive");
    if (c.n_communities == 0) throw InvalidConfig("n_communities must be positive");
    if (c.n_outlets == 0) throw InvalidConfig("n_outlets must be positive");
    if (c.n_users < c.n_outlets + 2) throw InvalidConfig("n_users must exceed n_outlets by at least two");
    if (c.min_replies == 0) throw InvalidConfig("min_replies must be positive");
    if (c.max_replies < c.min_replies) throw InvalidConfig("max_replies is below min_replies");
    if (c.root_weight == 0.0) throw InvalidConfig("root_weight must be positive");
}

GeneratorConfig config_from_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw InvalidConfig("generator config is not a JSON object");
    static const std::set<std::string> known{
        "seed", "n_conversations", "n_users", "n_communities", "n_outlets", "p_in", "p_out", "follower_mu",
        "follower_sigma", "min_replies", "max_replies", "size_mu", "size_sigma", "root_weight", "recency_weight",
        "mean_gap_seconds", "reuse_prob", "cohesion", "back_and_forth", "root_toxic_prob", "planted",
        "embeddedness_logit", "structure_effect", "structure_shape", "content_effect", "content_score_shift",
        "url_prob", "orphan_replies", "untracked_roots", "solo_conversations"};
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) throw InvalidConfig("unknown generator key: " + key);

    GeneratorConfig c;
    read_field(j, "seed", c.seed);
    read_field(j, "n_conversations", c.n_conversations);
    read_field(j, "n_users", c.n_users);
    read_field(j, "n_communities", c.n_communities);
    read_field(j, "n_outlets", c.n_outlets);
    read_field(j, "p_in", c.p_in);
    read_field(j, "p_out", c.p_out);
    read_field(j, "follower_mu", c.follower_mu);
    read_field(j, "follower_sigma", c.follower_sigma);
    read_field(j, "min_replies", c.min_replies);
    read_field(j, "max_replies", c.max_replies);
    read_field(j, "size_mu", c.size_mu);
    read_field(j, "size_sigma", c.size_sigma);
    read_field(j, "root_weight", c.root_weight);
    read_field(j, "recency_weight", c.recency_weight);
    read_field(j, "mean_gap_seconds", c.mean_gap_seconds);
    read_field(j, "reuse_prob", c.reuse_prob);
    read_field(j, "cohesion", c.cohesion);
    read_field(j, "back_and_forth", c.back_and_forth);
    read_field(j, "root_toxic_prob", c.root_toxic_prob);
    read_field(j, "embeddedness_logit", c.embeddedness_logit);
    read_field(j, "structure_effect", c.structure_effect);
    read_field(j, "structure_shape", c.structure_shape);
    read_field(j, "content_effect", c.content_effect);
    read_field(j, "content_score_shift", c.content_score_shift);
    read_field(j, "url_prob", c.url_prob);
    read_field(j, "orphan_replies", c.orphan_replies);
    read_field(j, "untracked_roots", c.untracked_roots);
    read_field(j, "solo_conversations", c.solo_conversations);
    if (j.contains("planted")) {
        const auto& p = j.at("planted");
        if (!p.is_object()) throw InvalidConfig("planted must be an object");
        const char* sides[2] = {"nontoxic_parent", "toxic_parent"};
        for (std::size_t t = 0; t < 2; ++t) {
            if (!p.contains(sides[t])) continue;
            for (std::size_t e = 0; e < 4; ++e) read_field(p.at(sides[t]), kEdgeKeys[e], c.planted[t][e]);
        }
    }
    validate(c);
    return c;
}

std::string config_to_json(const GeneratorConfig& c) {
    json planted;
    const char* sides[2] = {"nontoxic_parent", "toxic_parent"};
    for (std::size_t t = 0; t < 2; ++t)
        for (std::size_t e = 0; e < 4; ++e) planted[sides[t]][kEdgeKeys[e]] = c.planted[t][e];
    json j{{"seed", c.seed},
           {"n_conversations", c.n_conversations},
           {"n_users", c.n_users},
           {"n_communities", c.n_communities},
           {"n_outlets", c.n_outlets},
           {"p_in", c.p_in},
           {"p_out", c.p_out},
           {"follower_mu", c.follower_mu},
           {"follower_sigma", c.follower_sigma},
           {"min_replies", c.min_replies},
           {"max_replies", c.max_replies},
           {"size_mu", c.size_mu},
           {"size_sigma", c.size_sigma},
           {"root_weight", c.root_weight},
           {"recency_weight", c.recency_weight},
           {"mean_gap_seconds", c.mean_gap_seconds},
           {"reuse_prob", c.reuse_prob},
           {"cohesion", c.cohesion},
           {"back_and_forth", c.back_and_forth},
           {"root_toxic_prob", c.root_toxic_prob},
           {"planted", planted},
           {"embeddedness_logit", c.embeddedness_logit},
           {"structure_effect", c.structure_effect},
           {"structure_shape", c.structure_shape},
           {"content_effect", c.content_effect},
           {"content_score_shift", c.content_score_shift},
           {"url_prob", c.url_prob},
           {"orphan_replies", c.orphan_replies},
           {"untracked_roots", c.untracked_roots},
           {"solo_conversations", c.solo_conversations}};
    return j.dump(2);
}

SnapshotStore Corpus::store() const {
    SnapshotStore s;
    for (const auto& [user, snap] : snapshots) s.add(user, snap);
    return s;
}

Corpus generate(const GeneratorConfig& config) {
    validate(config);
    Corpus out;
    const World w = build_world(config);

    const auto convs = parallel_map<Conversation>(config.n_conversations, 1,
                                                  [&](std::size_t i) { return grow(config, w, i); });
    for (const auto& c : convs) {
        out.posts.insert(out.posts.end(), c.posts.begin(), c.posts.end());
        out.z_structure.push_back(c.z_s);
        out.z_content.push_back(c.z_c);
    }
    inject_violations(config, w, out.posts);

    for (std::size_t u = 0; u < w.names.size(); ++u) {
        Snapshot s;
        s.time = 0;
        for (auto v : w.friends[u]) s.friends.push_back(w.names[v]);
        std::sort(s.friends.begin(), s.friends.end());
        s.friend_count = static_cast<std::int64_t>(s.friends.size());
        s.follower_count = w.followers[u];
        out.snapshots.emplace_back(w.names[u], std::move(s));
    }
    std::sort(out.snapshots.begin(), out.snapshots.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    for (std::size_t k = 0; k < config.n_communities; ++k) {
        const double leaning = config.n_communities == 1
                                   ? 0.0
                                   : -1.0 + 2.0 * (static_cast<double>(k) + 0.5) / static_cast<double>(config.n_communities);
        out.alignment.set(w.domains[k], leaning);
    }
    for (std::size_t i = 0; i < config.n_outlets; ++i) out.tracked.insert(w.names[i]);
    return out;
}

void write_corpus(const Corpus& corpus, const GeneratorConfig& config, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) throw UnreadableInput("cannot write " + (dir / name).string());
        return f;
    };
    {
        auto f = open("posts.jsonl");
        for (const auto& p : corpus.posts) write_post_line(f, p);
    }
    {
        auto f = open("snapshots.jsonl");
        for (const auto& [user, s] : corpus.snapshots) write_snapshot_line(f, user, s);
    }
    {
        auto f = open("alignment.tsv");
        for (const auto& [domain, score] : corpus.alignment.scores()) f << domain << '\t' << json(score).dump() << '\n';
    }
    {
        auto f = open("tracked.txt");
        for (const auto& t : corpus.tracked) f << t << '\n';
    }
    {
        auto f = open("latents.csv");
        f << "conversation,z_structure,z_content\n";
        for (std::size_t i = 0; i < corpus.z_structure.size(); ++i)
            f << fmt("c%06zu_%04zu", i, 0) << ',' << json(corpus.z_structure[i]).dump() << ','
              << json(corpus.z_content[i]).dump() << '\n';
    }
    {
        auto f = open("config.json");
        f << config_to_json(config) << '\n';
    }
}

}  // namespace toxconv::synth
