#pragma once

#include <istream>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "toxconv/core_model.hpp"
#include "toxconv/snapshots.hpp"

namespace toxconv {

struct PostParseResult {
    std::vector<Post> posts;       // input order, first occurrence of each id
    std::size_t malformed = 0;
    std::size_t duplicates = 0;
};

struct SnapshotParseResult {
    SnapshotStore store;
    std::size_t malformed = 0;
    std::size_t duplicates = 0;
};

// One JSON object per line. Malformed lines are counted and skipped; only a
// failing stream raises UnreadableInput.
PostParseResult parse_posts(std::istream& in);
SnapshotParseResult parse_snapshots(std::istream& in);

// Parse a single record; throws SchemaViolation describing the first problem.
Post post_from_json_line(const std::string& line);

void write_post_line(std::ostream& out, const Post& post);
void write_snapshot_line(std::ostream& out, const std::string& user, const Snapshot& s);

struct LinkResult {
    std::vector<ReplyTree> trees;              // ordered by root (time, id)
    std::vector<std::string> cycle_members;    // sorted ids of posts on a reply cycle
    std::size_t dropped_below_cycle = 0;       // posts whose ancestry ends in a cycle
    std::size_t orphan_rooted = 0;             // trees whose root's parent is absent
};

// Groups posts into maximal reply trees by following parent links. Posts on
// a cycle (and their descendants) are dropped and reported.
LinkResult link_replies(std::vector<Post> posts);

struct CorpusFilter {
    std::set<std::string> tracked_accounts;
    std::size_t min_distinct_users = 2;
};

// Keeps trees rooted in a post by, or mentioning, a tracked account, with at
// least one reply and `min_distinct_users` participants. Orphan-rooted trees
// are dropped.
std::vector<ReplyTree> filter_conversations(std::vector<ReplyTree> trees, const CorpusFilter& filter);

bool passes_filter(const ReplyTree& tree, const CorpusFilter& filter);

// Flattens trees back into posts with `root` filled in.
std::vector<Post> flatten_with_roots(const std::vector<ReplyTree>& trees);

}  // namespace toxconv
