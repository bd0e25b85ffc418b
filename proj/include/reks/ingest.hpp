#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_set>
#include <vector>

namespace reks {

/// One row of the raw interaction log.
struct Interaction {
    std::string user_id;
    std::string item_id;
    std::int64_t timestamp = 0;  // seconds since epoch, UTC
};

/// One metadata record. Absent keys parse as empty lists / no brand.
struct ItemMetadata {
    std::string item_id;
    std::string brand;  // empty means none
    std::vector<std::string> categories;
    std::vector<std::string> also_bought;
    std::vector<std::string> also_viewed;
    std::vector<std::string> bought_together;
};

/// An anonymous session: the ordered prefix plus the held-out next item.
struct Session {
    std::string user_id;
    std::vector<std::string> items;  // prefix, length >= 2
    std::string target;              // held-out last item of the raw session
};

struct DatasetSplit {
    std::vector<Session> train;
    std::vector<Session> validation;
    std::vector<Session> test;
    std::uint64_t seed = 0;
};

struct SessionizeOptions {
    int min_item_count = 5;    // items rarer than this in the raw log are dropped
    int min_session_len = 2;   // raw day-groups shorter than this are dropped
    int min_prefix_len = 2;    // prefix length required after target holdout
};

struct SessionizeSummary {
    std::size_t raw_interactions = 0;
    std::size_t interactions_kept = 0;
    std::size_t vocabulary_size = 0;
    std::size_t day_groups = 0;
    std::size_t sessions_kept = 0;
    std::size_t dropped_short = 0;  // day-groups below min_session_len or min_prefix_len+1
};

/// Parses `user<TAB>item<TAB>timestamp` lines. Throws ParseError with the
/// offending line number on malformed input; an empty file yields an empty list.
std::vector<Interaction> parse_interactions(const std::string& path);
std::vector<Interaction> parse_interactions(std::istream& in);

/// Parses one JSON object per line; see ItemMetadata for the keys.
/// Duplicate ids within a list are collapsed, first occurrence kept.
std::vector<ItemMetadata> parse_metadata(const std::string& path);
std::vector<ItemMetadata> parse_metadata(std::istream& in);

/// Groups each user's interactions by UTC calendar day into sessions,
/// after removing globally rare items, and holds out each session's last
/// item as the prediction target.
std::vector<Session> sessionize(const std::vector<Interaction>& interactions,
                                const SessionizeOptions& opts = {},
                                SessionizeSummary* summary = nullptr);

/// The set of item ids that survive the frequency filter.
std::unordered_set<std::string> item_vocabulary(const std::vector<Interaction>& interactions,
                                                int min_item_count);

/// Seed-deterministic shuffle split. Sizes follow floor-then-largest-remainder
/// on the ratios. Throws DataError for fewer than 3 sessions, ConfigError for
/// ratios that do not sum to 1.
DatasetSplit split_sessions(const std::vector<Session>& sessions,
                            const std::array<double, 3>& ratios, std::uint64_t seed);

DatasetSplit split_sessions(const std::vector<Session>& sessions, std::uint64_t seed);

/// JSON-lines serialization of a session list ({"user":…,"items":[…],"target":…}).
/// A non-empty `header` is emitted verbatim as the first line; read_sessions
/// skips a leading line whose object has no "user" key.
void write_sessions(const std::string& path, const std::vector<Session>& sessions,
                    const std::string& header = "");
std::vector<Session> read_sessions(const std::string& path);

}  // namespace reks
