#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "reks/errors.hpp"
#include "reks/ingest.hpp"
#include "temp_dir.hpp"

using namespace reks;

namespace {

Interaction row(const std::string& user, const std::string& item, std::int64_t ts) {
    return Interaction{user, item, ts};
}

std::string session_key(const Session& s) {
    std::string k = s.user_id + "|";
    for (const auto& it : s.items) k += it + ",";
    return k + "|" + s.target;
}

std::multiset<std::string> session_keys(const std::vector<Session>& sessions) {
    std::multiset<std::string> keys;
    for (const auto& s : sessions) keys.insert(session_key(s));
    return keys;
}

}  // namespace

TEST_CASE("parse_interactions reads tab-separated rows") {
    std::istringstream in("u1\ti1\t100\nu2\ti2\t200\n\nu1\ti3\t300\n");
    const auto rows = parse_interactions(in);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].user_id == "u1");
    CHECK(rows[0].item_id == "i1");
    CHECK(rows[0].timestamp == 100);
    CHECK(rows[2].item_id == "i3");
}

TEST_CASE("parse_interactions rejects malformed rows with the line number") {
    SUBCASE("missing field") {
        std::istringstream in("u1\ti1\t100\nu2\ti2\n");
        try {
            parse_interactions(in);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
    }
    SUBCASE("too many fields") {
        std::istringstream in("u\ti\t5\textra\n");
        try {
            parse_interactions(in);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 1);
        }
    }
    SUBCASE("non-numeric timestamp") {
        std::istringstream in("u\ti\tlater\n");
        CHECK_THROWS_AS(parse_interactions(in), ParseError);
    }
    SUBCASE("trailing junk after the number") {
        std::istringstream in("u\ti\t12x\n");
        CHECK_THROWS_AS(parse_interactions(in), ParseError);
    }
    SUBCASE("negative timestamp") {
        std::istringstream in("u\ti\t-1\n");
        CHECK_THROWS_AS(parse_interactions(in), ParseError);
    }
    SUBCASE("empty id") {
        std::istringstream in("\ti\t5\n");
        CHECK_THROWS_AS(parse_interactions(in), ParseError);
    }
}

TEST_CASE("parse_interactions on an empty stream yields an empty list") {
    std::istringstream in("");
    CHECK(parse_interactions(in).empty());
}

TEST_CASE("parse_interactions throws for a missing file") {
    CHECK_THROWS_AS(parse_interactions("/nonexistent/interactions.tsv"), DataError);
}

TEST_CASE("parse_metadata fills absent keys with empty lists") {
    std::istringstream in(
        R"({"item":"p1","brand":"b","categories":["c1","c2"],"also_bought":["x"],"also_viewed":[],"bought_together":["y","z"]})"
        "\n"
        R"({"item":"p2"})"
        "\n");
    const auto records = parse_metadata(in);
    REQUIRE(records.size() == 2);
    CHECK(records[0].item_id == "p1");
    CHECK(records[0].brand == "b");
    CHECK(records[0].categories == std::vector<std::string>{"c1", "c2"});
    CHECK(records[0].bought_together == std::vector<std::string>{"y", "z"});
    CHECK(records[1].brand.empty());
    CHECK(records[1].categories.empty());
    CHECK(records[1].also_bought.empty());
}

TEST_CASE("parse_metadata collapses duplicate ids keeping the first occurrence") {
    std::istringstream in(R"({"item":"p1","also_bought":["a","b","a","c","b"]})" "\n");
    const auto records = parse_metadata(in);
    REQUIRE(records.size() == 1);
    CHECK(records[0].also_bought == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("parse_metadata reports the failing line") {
    SUBCASE("bad JSON") {
        std::istringstream in(R"({"item":"p1"})" "\n{not json\n");
        try {
            parse_metadata(in);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
    }
    SUBCASE("missing item key") {
        std::istringstream in(R"({"brand":"b"})" "\n");
        CHECK_THROWS_AS(parse_metadata(in), ParseError);
    }
    SUBCASE("scalar where a list is expected") {
        std::istringstream in(R"({"item":"p","categories":"c"})" "\n");
        CHECK_THROWS_AS(parse_metadata(in), ParseError);
    }
    SUBCASE("non-string list entry") {
        std::istringstream in(R"({"item":"p","also_bought":[1]})" "\n");
        CHECK_THROWS_AS(parse_metadata(in), ParseError);
    }
}

TEST_CASE("item_vocabulary keeps items meeting the count threshold") {
    std::vector<Interaction> rows;
    for (int i = 0; i < 5; ++i) rows.push_back(row("u", "common", i));
    for (int i = 0; i < 4; ++i) rows.push_back(row("u", "rare", 100 + i));
    const auto vocab = item_vocabulary(rows, 5);
    CHECK(vocab.contains("common"));
    CHECK(!vocab.contains("rare"));
    CHECK(item_vocabulary(rows, 1).size() == 2);
}

TEST_CASE("sessionize groups one user's interactions by UTC calendar day") {
    // 86399 is the last second of day 0; 86400 opens day 1.
    const std::vector<Interaction> rows = {
        row("u", "a", 10),    row("u", "b", 50000), row("u", "c", 86399),
        row("u", "d", 86400), row("u", "e", 86401), row("u", "f", 90000),
    };
    const auto sessions = sessionize(rows, SessionizeOptions{1, 2, 2});
    REQUIRE(sessions.size() == 2);
    CHECK(sessions[0].items == std::vector<std::string>{"a", "b"});
    CHECK(sessions[0].target == "c");
    CHECK(sessions[1].items == std::vector<std::string>{"d", "e"});
    CHECK(sessions[1].target == "f");
}

TEST_CASE("sessionize sorts within a user by timestamp before grouping") {
    const std::vector<Interaction> rows = {
        row("u", "c", 300), row("u", "a", 100), row("u", "b", 200),
    };
    const auto sessions = sessionize(rows, SessionizeOptions{1, 2, 2});
    REQUIRE(sessions.size() == 1);
    CHECK(sessions[0].items == std::vector<std::string>{"a", "b"});
    CHECK(sessions[0].target == "c");
}

TEST_CASE("sessionize keeps input order for equal timestamps") {
    const std::vector<Interaction> rows = {
        row("u", "first", 100), row("u", "second", 100), row("u", "third", 100),
    };
    const auto sessions = sessionize(rows, SessionizeOptions{1, 2, 2});
    REQUIRE(sessions.size() == 1);
    CHECK(sessions[0].items == std::vector<std::string>{"first", "second"});
    CHECK(sessions[0].target == "third");
}

TEST_CASE("sessionize drops rare items before grouping") {
    // "noise" appears once; with min_item_count=2 it must vanish, leaving a
    // 3-interaction day that still clears the prefix requirement.
    const std::vector<Interaction> rows = {
        row("u", "a", 10),  row("u", "noise", 20), row("u", "b", 30), row("u", "c", 40),
        row("v", "a", 10),  row("v", "b", 20),     row("v", "c", 30),
    };
    SessionizeSummary summary;
    const auto sessions = sessionize(rows, SessionizeOptions{2, 2, 2}, &summary);
    REQUIRE(sessions.size() == 2);
    for (const auto& s : sessions) {
        CHECK(s.items == std::vector<std::string>{"a", "b"});
        CHECK(s.target == "c");
    }
    CHECK(summary.raw_interactions == 7);
    CHECK(summary.interactions_kept == 6);
    CHECK(summary.vocabulary_size == 3);
}

TEST_CASE("sessionize drops day groups too short for a prefix plus target") {
    const std::vector<Interaction> rows = {
        row("u", "a", 10),                        // day 0: singleton
        row("u", "b", 86400), row("u", "c", 86500),  // day 1: pair -> 1-item prefix
        row("u", "d", 172800), row("u", "e", 172900), row("u", "f", 173000),  // day 2
    };
    SessionizeSummary summary;
    const auto sessions = sessionize(rows, SessionizeOptions{1, 2, 2}, &summary);
    REQUIRE(sessions.size() == 1);
    CHECK(sessions[0].items.size() == 2);
    CHECK(summary.day_groups == 3);
    CHECK(summary.sessions_kept == 1);
    CHECK(summary.dropped_short == 2);

    // Relaxing the prefix floor to 1 rescues the pair.
    const auto relaxed = sessionize(rows, SessionizeOptions{1, 2, 1});
    CHECK(relaxed.size() == 2);
    CHECK(relaxed[0].items == std::vector<std::string>{"b"});
    CHECK(relaxed[0].target == "c");
}

TEST_CASE("split_sessions applies floor-then-largest-remainder sizing") {
    auto make = [](std::size_t n) {
        std::vector<Session> sessions;
        for (std::size_t i = 0; i < n; ++i)
            sessions.push_back(Session{"u" + std::to_string(i),
                                       {"a", "b"},
                                       "t" + std::to_string(i)});
        return sessions;
    };

    SUBCASE("100 sessions split 75/10/15") {
        const auto split = split_sessions(make(100), {0.75, 0.10, 0.15}, 3);
        CHECK(split.train.size() == 75);
        CHECK(split.validation.size() == 10);
        CHECK(split.test.size() == 15);
    }
    SUBCASE("20 sessions split 15/2/3") {
        const auto split = split_sessions(make(20), {0.75, 0.10, 0.15}, 3);
        CHECK(split.train.size() == 15);
        CHECK(split.validation.size() == 2);
        CHECK(split.test.size() == 3);
    }
    SUBCASE("10 sessions: the leftover goes to the largest remainder") {
        // floors 7/1/1, remainders 0.5/0.0/0.5; ties resolve to the lower index.
        const auto split = split_sessions(make(10), {0.75, 0.10, 0.15}, 3);
        CHECK(split.train.size() == 8);
        CHECK(split.validation.size() == 1);
        CHECK(split.test.size() == 1);
    }
}

TEST_CASE("split_sessions is a seed-deterministic partition") {
    std::vector<Session> sessions;
    for (int i = 0; i < 40; ++i)
        sessions.push_back(Session{"u" + std::to_string(i % 7),
                                   {"x", "y"},
                                   "t" + std::to_string(i)});

    const auto a = split_sessions(sessions, {0.75, 0.10, 0.15}, 11);
    const auto b = split_sessions(sessions, {0.75, 0.10, 0.15}, 11);
    CHECK(session_keys(a.train) == session_keys(b.train));
    CHECK(session_keys(a.validation) == session_keys(b.validation));
    CHECK(session_keys(a.test) == session_keys(b.test));
    for (std::size_t i = 0; i < a.train.size(); ++i)
        CHECK(session_key(a.train[i]) == session_key(b.train[i]));

    // The three parts are disjoint and their union is the input.
    std::multiset<std::string> all = session_keys(a.train);
    for (const auto& s : a.validation) all.insert(session_key(s));
    for (const auto& s : a.test) all.insert(session_key(s));
    CHECK(all == session_keys(sessions));

    const auto c = split_sessions(sessions, {0.75, 0.10, 0.15}, 12);
    bool any_difference = false;
    for (std::size_t i = 0; i < a.train.size(); ++i)
        if (session_key(a.train[i]) != session_key(c.train[i])) any_difference = true;
    CHECK(any_difference);
}

TEST_CASE("split_sessions validates its inputs") {
    std::vector<Session> sessions(5, Session{"u", {"a", "b"}, "t"});
    CHECK_THROWS_AS(split_sessions(sessions, {0.5, 0.4, 0.2}, 1), ConfigError);
    std::vector<Session> tiny(2, Session{"u", {"a", "b"}, "t"});
    CHECK_THROWS_AS(split_sessions(tiny, {0.75, 0.10, 0.15}, 1), DataError);
}

TEST_CASE("write_sessions and read_sessions round-trip, header skipped") {
    TempDir dir;
    const std::vector<Session> sessions = {
        Session{"u1", {"a", "b", "c"}, "d"},
        Session{"u2", {"x", "y"}, "z"},
    };
    const std::string path = dir.file("sessions.jsonl");
    write_sessions(path, sessions, R"({"fingerprint":"abc","seed":7})");

    const auto loaded = read_sessions(path);
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].user_id == "u1");
    CHECK(loaded[0].items == std::vector<std::string>{"a", "b", "c"});
    CHECK(loaded[0].target == "d");
    CHECK(loaded[1].target == "z");

    // Without a header the first real session must not be eaten.
    const std::string bare = dir.file("bare.jsonl");
    write_sessions(bare, sessions);
    CHECK(read_sessions(bare).size() == 2);
}
