#include "toxconv/ingestion.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "toxconv/errors.hpp"

namespace toxconv {

using nlohmann::json;

namespace {

std::string require_string(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) throw SchemaViolation(std::string("field '") + key + "' must be a string");
    std::string s = it->get<std::string>();
    if (s.empty()) throw SchemaViolation(std::string("field '") + key + "' is empty");
    return s;
}

std::int64_t require_int(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_number_integer())
        throw SchemaViolation(std::string("field '") + key + "' must be an integer");
    return it->get<std::int64_t>();
}

std::optional<std::string> optional_string(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw SchemaViolation(std::string("field '") + key + "' must be a string or null");
    return it->get<std::string>();
}

std::vector<std::string> string_array(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return {};
    if (!it->is_array()) throw SchemaViolation(std::string("field '") + key + "' must be an array");
    std::vector<std::string> out;
    for (const auto& v : *it) {
        if (!v.is_string()) throw SchemaViolation(std::string("field '") + key + "' must hold strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

bool blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

json parse_object(const std::string& line) {
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) throw SchemaViolation("line is not a JSON object");
    return obj;
}

}  // namespace

Post post_from_json_line(const std::string& line) {
    const json obj = parse_object(line);
    Post p;
    p.id = require_string(obj, "id");
    p.author = require_string(obj, "author");
    p.parent = optional_string(obj, "parent");
    p.root = optional_string(obj, "root");
    p.time = require_int(obj, "time");
    p.text = optional_string(obj, "text");
    if (auto it = obj.find("toxicity"); it != obj.end() && !it->is_null()) {
        if (!it->is_number()) throw SchemaViolation("field 'toxicity' must be a number or null");
        p.toxicity = it->get<double>();
    }
    p.mentions = string_array(obj, "mentions");
    p.url_domains = string_array(obj, "url_domains");
    try {
        validate_post(p);
    } catch (const InvalidArgument& e) {
        throw SchemaViolation(e.what());
    }
    return p;
}

PostParseResult parse_posts(std::istream& in) {
    if (!in) throw UnreadableInput("post stream is not readable");
    PostParseResult out;
    std::unordered_set<std::string> seen;
    std::string line;
    while (std::getline(in, line)) {
        if (blank(line)) continue;
        Post p;
        try {
            p = post_from_json_line(line);
        } catch (const SchemaViolation&) {
            ++out.malformed;
            continue;
        }
        if (!seen.insert(p.id).second) {
            ++out.duplicates;
            continue;
        }
        out.posts.push_back(std::move(p));
    }
    if (in.bad()) throw UnreadableInput("read error in post stream");
    return out;
}

SnapshotParseResult parse_snapshots(std::istream& in) {
    if (!in) throw UnreadableInput("snapshot stream is not readable");
    SnapshotParseResult out;
    std::string line;
    while (std::getline(in, line)) {
        if (blank(line)) continue;
        std::string user;
        Snapshot s;
        try {
            const json obj = parse_object(line);
            user = require_string(obj, "user");
            s.time = require_int(obj, "time");
            s.friends = string_array(obj, "friends");
            s.follower_count = require_int(obj, "follower_count");
            s.friend_count = require_int(obj, "friend_count");
            if (s.follower_count < 0 || s.friend_count < 0) throw SchemaViolation("negative count");
        } catch (const SchemaViolation&) {
            ++out.malformed;
            continue;
        }
        try {
            out.store.add(user, std::move(s));
        } catch (const SchemaViolation&) {
            ++out.duplicates;
        }
    }
    if (in.bad()) throw UnreadableInput("read error in snapshot stream");
    return out;
}

void write_post_line(std::ostream& out, const Post& p) {
    json obj;
    obj["id"] = p.id;
    obj["author"] = p.author;
    obj["parent"] = p.parent ? json(*p.parent) : json(nullptr);
    if (p.root) obj["root"] = *p.root;
    obj["time"] = p.time;
    obj["text"] = p.text ? json(*p.text) : json(nullptr);
    obj["toxicity"] = p.toxicity ? json(*p.toxicity) : json(nullptr);
    obj["mentions"] = p.mentions;
    obj["url_domains"] = p.url_domains;
    out << obj.dump() << '\n';
}

void write_snapshot_line(std::ostream& out, const std::string& user, const Snapshot& s) {
    json obj;
    obj["user"] = user;
    obj["time"] = s.time;
    obj["friends"] = s.friends;
    obj["follower_count"] = s.follower_count;
    obj["friend_count"] = s.friend_count;
    out << obj.dump() << '\n';
}

LinkResult link_replies(std::vector<Post> posts) {
    LinkResult result;
    // Keep the first occurrence of each id.
    std::unordered_map<std::string, std::size_t> index;
    {
        std::vector<Post> unique;
        unique.reserve(posts.size());
        for (auto& p : posts)
            if (index.emplace(p.id, unique.size()).second) unique.push_back(std::move(p));
        posts = std::move(unique);
    }
    const std::size_t n = posts.size();
    std::vector<std::int64_t> parent(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (!posts[i].parent) continue;
        auto it = index.find(*posts[i].parent);
        if (it != index.end()) parent[i] = static_cast<std::int64_t>(it->second);
    }

    // Resolve each post's tree root. state: 0 unvisited, 1 on path, 2 done.
    constexpr std::int64_t kCycle = -2;
    std::vector<std::int64_t> root(n, -1);
    std::vector<char> state(n, 0);
    std::vector<char> on_cycle(n, 0);
    std::vector<std::size_t> path;
    for (std::size_t start = 0; start < n; ++start) {
        if (state[start] == 2) continue;
        path.clear();
        std::size_t u = start;
        std::int64_t resolved = 0;
        while (true) {
            if (state[u] == 2) {
                resolved = root[u];
                break;
            }
            if (state[u] == 1) {
                // Everything on the path from u onward forms the cycle.
                auto pos = std::find(path.begin(), path.end(), u);
                for (auto it = pos; it != path.end(); ++it) on_cycle[*it] = 1;
                resolved = kCycle;
                break;
            }
            state[u] = 1;
            path.push_back(u);
            if (parent[u] < 0) {
                resolved = static_cast<std::int64_t>(u);
                break;
            }
            u = static_cast<std::size_t>(parent[u]);
        }
        for (std::size_t v : path) {
            state[v] = 2;
            root[v] = resolved;
        }
    }

    std::map<std::size_t, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < n; ++i) {
        if (root[i] == kCycle) {
            if (on_cycle[i])
                result.cycle_members.push_back(posts[i].id);
            else
                ++result.dropped_below_cycle;
            continue;
        }
        if (static_cast<std::size_t>(root[i]) != i) members[static_cast<std::size_t>(root[i])].push_back(i);
    }
    std::sort(result.cycle_members.begin(), result.cycle_members.end());

    for (std::size_t r = 0; r < n; ++r) {
        if (root[r] != static_cast<std::int64_t>(r)) continue;
        const bool orphan = posts[r].parent.has_value();
        std::vector<Post> replies;
        if (auto it = members.find(r); it != members.end()) {
            replies.reserve(it->second.size());
            for (std::size_t i : it->second) replies.push_back(posts[i]);
        }
        result.trees.push_back(ReplyTree::build(posts[r], std::move(replies), orphan));
        if (orphan) ++result.orphan_rooted;
    }
    std::sort(result.trees.begin(), result.trees.end(),
              [](const ReplyTree& a, const ReplyTree& b) { return earlier(a.root(), b.root()); });
    return result;
}

bool passes_filter(const ReplyTree& tree, const CorpusFilter& filter) {
    if (tree.orphan_rooted() || tree.reply_count() == 0) return false;
    const auto& root = tree.root();
    bool tracked = filter.tracked_accounts.count(root.author) > 0;
    for (const auto& m : root.mentions) tracked = tracked || filter.tracked_accounts.count(m) > 0;
    if (!tracked) return false;
    return tree.participants().size() >= filter.min_distinct_users;
}

std::vector<ReplyTree> filter_conversations(std::vector<ReplyTree> trees, const CorpusFilter& filter) {
    if (filter.tracked_accounts.empty()) throw InvalidArgument("corpus filter needs at least one tracked account");
    std::vector<ReplyTree> out;
    for (auto& t : trees)
        if (passes_filter(t, filter)) out.push_back(std::move(t));
    return out;
}

std::vector<Post> flatten_with_roots(const std::vector<ReplyTree>& trees) {
    std::vector<Post> out;
    for (const auto& t : trees) {
        for (const auto& p : t.posts()) {
            Post q = p;
            q.root = t.root().id;
            out.push_back(std::move(q));
        }
    }
    return out;
}

}  // namespace toxconv
