#include "reks/ingest.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "reks/errors.hpp"

namespace reks {

namespace {

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    return in;
}

}  // namespace

std::vector<Interaction> parse_interactions(const std::string& path) {
    auto in = open_or_throw(path);
    return parse_interactions(in);
}

std::vector<Interaction> parse_interactions(std::istream& in) {
    std::vector<Interaction> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto tab1 = line.find('\t');
        const auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
        if (tab1 == std::string::npos || tab2 == std::string::npos)
            throw ParseError("expected user<TAB>item<TAB>timestamp", lineno);
        if (line.find('\t', tab2 + 1) != std::string::npos)
            throw ParseError("too many fields", lineno);
        Interaction it;
        it.user_id = line.substr(0, tab1);
        it.item_id = line.substr(tab1 + 1, tab2 - tab1 - 1);
        const std::string ts = line.substr(tab2 + 1);
        if (it.user_id.empty() || it.item_id.empty())
            throw ParseError("empty id field", lineno);
        try {
            std::size_t pos = 0;
            it.timestamp = std::stoll(ts, &pos);
            if (pos != ts.size()) throw std::invalid_argument(ts);
        } catch (const std::exception&) {
            throw ParseError("bad timestamp '" + ts + "'", lineno);
        }
        if (it.timestamp < 0) throw ParseError("negative timestamp", lineno);
        out.push_back(std::move(it));
    }
    return out;
}

namespace {

std::vector<std::string> dedup_keep_order(std::vector<std::string> ids) {
    std::unordered_set<std::string> seen;
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (auto& id : ids)
        if (seen.insert(id).second) out.push_back(std::move(id));
    return out;
}

std::vector<std::string> string_list(const nlohmann::json& obj, const char* key,
                                     std::size_t lineno) {
    if (!obj.contains(key)) return {};
    const auto& v = obj.at(key);
    if (!v.is_array()) throw ParseError(std::string("'") + key + "' is not a list", lineno);
    std::vector<std::string> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_string()) throw ParseError(std::string("'") + key + "' holds a non-string", lineno);
        out.push_back(e.get<std::string>());
    }
    return dedup_keep_order(std::move(out));
}

}  // namespace

std::vector<ItemMetadata> parse_metadata(const std::string& path) {
    auto in = open_or_throw(path);
    return parse_metadata(in);
}

std::vector<ItemMetadata> parse_metadata(std::istream& in) {
    std::vector<ItemMetadata> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("bad JSON: ") + e.what(), lineno);
        }
        if (!obj.is_object()) throw ParseError("line is not a JSON object", lineno);
        ItemMetadata md;
        if (!obj.contains("item") || !obj.at("item").is_string())
            throw ParseError("missing 'item' key", lineno);
        md.item_id = obj.at("item").get<std::string>();
        if (md.item_id.empty()) throw ParseError("empty 'item' id", lineno);
        if (obj.contains("brand") && !obj.at("brand").is_null()) {
            if (!obj.at("brand").is_string()) throw ParseError("'brand' is not a string", lineno);
            md.brand = obj.at("brand").get<std::string>();
        }
        md.categories = string_list(obj, "categories", lineno);
        md.also_bought = string_list(obj, "also_bought", lineno);
        md.also_viewed = string_list(obj, "also_viewed", lineno);
        md.bought_together = string_list(obj, "bought_together", lineno);
        out.push_back(std::move(md));
    }
    return out;
}

std::unordered_set<std::string> item_vocabulary(const std::vector<Interaction>& interactions,
                                                int min_item_count) {
    std::unordered_map<std::string, int> counts;
    for (const auto& it : interactions) ++counts[it.item_id];
    std::unordered_set<std::string> vocab;
    for (const auto& [item, n] : counts)
        if (n >= min_item_count) vocab.insert(item);
    return vocab;
}

std::vector<Session> sessionize(const std::vector<Interaction>& interactions,
                                const SessionizeOptions& opts, SessionizeSummary* summary) {
    SessionizeSummary local;
    local.raw_interactions = interactions.size();

    // Frequency filter runs once over the full raw log, before any grouping.
    const auto vocab = item_vocabulary(interactions, opts.min_item_count);
    local.vocabulary_size = vocab.size();

    std::vector<const Interaction*> kept;
    kept.reserve(interactions.size());
    for (const auto& it : interactions)
        if (vocab.contains(it.item_id)) kept.push_back(&it);
    local.interactions_kept = kept.size();

    // Stable sort keeps input order for equal (user, timestamp) pairs.
    std::stable_sort(kept.begin(), kept.end(), [](const Interaction* a, const Interaction* b) {
        if (a->user_id != b->user_id) return a->user_id < b->user_id;
        return a->timestamp < b->timestamp;
    });

    constexpr std::int64_t kSecondsPerDay = 86400;
    std::vector<Session> sessions;
    std::size_t i = 0;
    while (i < kept.size()) {
        const std::string& user = kept[i]->user_id;
        const std::int64_t day = kept[i]->timestamp / kSecondsPerDay;
        std::size_t j = i;
        while (j < kept.size() && kept[j]->user_id == user &&
               kept[j]->timestamp / kSecondsPerDay == day)
            ++j;
        ++local.day_groups;
        const std::size_t len = j - i;
        // Raw session must clear min_session_len and still leave a long
        // enough prefix once the last item becomes the target.
        if (len >= static_cast<std::size_t>(opts.min_session_len) &&
            len >= static_cast<std::size_t>(opts.min_prefix_len) + 1) {
            Session s;
            s.user_id = user;
            for (std::size_t k = i; k + 1 < j; ++k) s.items.push_back(kept[k]->item_id);
            s.target = kept[j - 1]->item_id;
            sessions.push_back(std::move(s));
            ++local.sessions_kept;
        } else {
            ++local.dropped_short;
        }
        i = j;
    }
    if (summary) *summary = local;
    return sessions;
}

DatasetSplit split_sessions(const std::vector<Session>& sessions,
                            const std::array<double, 3>& ratios, std::uint64_t seed) {
    double sum = ratios[0] + ratios[1] + ratios[2];
    if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("split ratios must sum to 1");
    if (sessions.size() < 3) throw DataError("need at least 3 sessions to split");

    const std::size_t n = sessions.size();
    std::array<std::size_t, 3> counts{};
    std::array<double, 3> frac{};
    std::size_t assigned = 0;
    for (int k = 0; k < 3; ++k) {
        const double exact = ratios[k] * static_cast<double>(n);
        counts[k] = static_cast<std::size_t>(exact);
        frac[k] = exact - static_cast<double>(counts[k]);
        assigned += counts[k];
    }
    // Hand out the remainder by largest fractional part, lower index first on ties.
    std::array<int, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return frac[a] > frac[b]; });
    for (std::size_t r = 0; assigned < n; ++r, ++assigned) ++counts[order[r % 3]];

    std::vector<std::size_t> idx(n);
    for (std::size_t k = 0; k < n; ++k) idx[k] = k;
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);

    DatasetSplit split;
    split.seed = seed;
    std::size_t pos = 0;
    for (std::size_t k = 0; k < counts[0]; ++k) split.train.push_back(sessions[idx[pos++]]);
    for (std::size_t k = 0; k < counts[1]; ++k) split.validation.push_back(sessions[idx[pos++]]);
    for (std::size_t k = 0; k < counts[2]; ++k) split.test.push_back(sessions[idx[pos++]]);
    return split;
}

DatasetSplit split_sessions(const std::vector<Session>& sessions, std::uint64_t seed) {
    return split_sessions(sessions, {0.75, 0.10, 0.15}, seed);
}

void write_sessions(const std::string& path, const std::vector<Session>& sessions,
                    const std::string& header) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    if (!header.empty()) out << header << '\n';
    for (const auto& s : sessions) {
        nlohmann::json obj;
        obj["user"] = s.user_id;
        obj["items"] = s.items;
        obj["target"] = s.target;
        out << obj.dump() << '\n';
    }
}

std::vector<Session> read_sessions(const std::string& path) {
    auto in = open_or_throw(path);
    std::vector<Session> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("bad JSON: ") + e.what(), lineno);
        }
        if (lineno == 1 && obj.is_object() && !obj.contains("user")) continue;  // header
        Session s;
        s.user_id = obj.at("user").get<std::string>();
        s.items = obj.at("items").get<std::vector<std::string>>();
        s.target = obj.at("target").get<std::string>();
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace reks
