#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace toxconv {

struct Snapshot {
    std::int64_t time = 0;
    std::vector<std::string> friends;  // sorted, unique, never the user itself
    std::int64_t follower_count = 0;
    std::int64_t friend_count = 0;
};

// Per-user, time-ordered friend/follower snapshots.
class SnapshotStore {
public:
    // Normalizes the friend list and inserts in time order. Throws
    // SchemaViolation if the user already has a snapshot at that time.
    void add(const std::string& user, Snapshot snapshot);

    // Latest snapshot with time <= at, else the earliest; nullptr if the
    // user has none.
    const Snapshot* at(const std::string& user, std::int64_t at) const;
    const Snapshot* earliest(const std::string& user) const;
    const std::vector<Snapshot>* history(const std::string& user) const;

    std::size_t user_count() const { return by_user_.size(); }
    std::size_t snapshot_count() const;
    const std::map<std::string, std::vector<Snapshot>>& all() const { return by_user_; }

private:
    std::map<std::string, std::vector<Snapshot>> by_user_;
};

}  // namespace toxconv
