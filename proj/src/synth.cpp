#include "reks/synth.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>

#include <json.hpp>

#include "reks/errors.hpp"

namespace reks {

namespace {

std::string product_id(std::size_t i) { return "P" + std::to_string(i); }
std::string user_id(std::size_t i) { return "U" + std::to_string(i); }
std::string link_token(std::size_t i) { return "L" + std::to_string(i); }
std::string view_token(std::size_t i) { return "V" + std::to_string(i); }

}  // namespace

SynthDataset make_synth_dataset(const SynthConfig& config) {
    if (config.num_products < 2) throw ConfigError("synth: need at least two products");
    if (config.num_users == 0) throw ConfigError("synth: need at least one user");
    if (config.min_prefix < 2 || config.max_prefix < config.min_prefix) {
        throw ConfigError("synth: prefix length bounds must satisfy 2 <= min <= max");
    }
    if (config.views_per_product > config.num_view_tokens) {
        throw ConfigError("synth: views_per_product exceeds the token pool");
    }

    std::mt19937_64 rng(config.seed);
    const std::size_t n = config.num_products;

    SynthDataset data;

    // Successor permutation: one cycle over a shuffled order, so no product
    // maps to itself and every product has exactly one predecessor.
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::shuffle(order.begin(), order.end(), rng);
    data.next_of.assign(n, 0u);
    for (std::size_t k = 0; k < n; ++k) {
        data.next_of[order[k]] = order[(k + 1) % n];
    }
    std::vector<std::uint32_t> prev_of(n, 0u);
    for (std::size_t i = 0; i < n; ++i) prev_of[data.next_of[i]] = static_cast<std::uint32_t>(i);

    // Metadata: the successor link token L_i sits in product i's
    // bought_together list and in next_of[i]'s also_bought list; everything
    // else is a distractor.
    data.metadata.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        ItemMetadata m;
        m.item_id = product_id(i);
        m.brand = "BR" + std::to_string(i % config.num_brands);
        // Offset by the brand-group row so category groups cut across brands.
        const std::size_t cat =
            (i % config.num_categories + i / config.num_categories) % config.num_categories;
        m.categories = {"C" + std::to_string(cat)};
        m.bought_together = {link_token(i)};
        m.also_bought = {link_token(prev_of[i])};
        std::vector<std::size_t> pool(config.num_view_tokens);
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        std::shuffle(pool.begin(), pool.end(), rng);
        for (std::size_t v = 0; v < config.views_per_product; ++v) {
            m.also_viewed.push_back(view_token(pool[v]));
        }
        data.metadata.push_back(std::move(m));
    }

    // Sessions. The first num_products sessions end their prefix on product
    // i, guaranteeing every product occurs in the log and every successor
    // pair occurs as a (last item, next interaction) step at least once.
    std::uniform_int_distribution<std::size_t> pick_product(0, n - 1);
    std::uniform_int_distribution<std::size_t> pick_len(config.min_prefix, config.max_prefix);
    constexpr std::int64_t kEpoch = 1'600'000'000;
    for (std::size_t s = 0; s < config.num_sessions; ++s) {
        const std::size_t last = s < n ? s : pick_product(rng);
        const std::size_t target = data.next_of[last];
        const std::size_t len = pick_len(rng);

        std::vector<std::size_t> items;
        items.reserve(len + 1);
        for (std::size_t j = 0; j + 1 < len; ++j) {
            std::size_t item = pick_product(rng);
            while (item == target || (!items.empty() && item == items.back())) {
                item = pick_product(rng);
            }
            items.push_back(item);
        }
        items.push_back(last);
        items.push_back(target);

        const std::string user = user_id(s % config.num_users);
        for (std::size_t j = 0; j < items.size(); ++j) {
            Interaction row;
            row.user_id = user;
            row.item_id = product_id(items[j]);
            row.timestamp = kEpoch + static_cast<std::int64_t>(s) * 86'400 +
                            static_cast<std::int64_t>(j) * 60;
            data.interactions.push_back(std::move(row));
        }
    }
    return data;
}

void write_synth_dataset(const SynthDataset& data, const SynthConfig& config,
                         const std::string& dir, const std::string& fingerprint) {
    {
        const std::string path = dir + "/interactions.tsv";
        std::ofstream out(path, std::ios::binary);
        if (!out) throw DataError("cannot open '" + path + "' for writing");
        for (const Interaction& row : data.interactions) {
            out << row.user_id << '\t' << row.item_id << '\t' << row.timestamp << '\n';
        }
        if (!out) throw DataError("failed writing '" + path + "'");
    }
    {
        const std::string path = dir + "/metadata.jsonl";
        std::ofstream out(path, std::ios::binary);
        if (!out) throw DataError("cannot open '" + path + "' for writing");
        for (const ItemMetadata& m : data.metadata) {
            nlohmann::ordered_json j;
            j["item"] = m.item_id;
            j["brand"] = m.brand;
            j["categories"] = m.categories;
            j["also_bought"] = m.also_bought;
            j["also_viewed"] = m.also_viewed;
            j["bought_together"] = m.bought_together;
            out << j.dump() << '\n';
        }
        if (!out) throw DataError("failed writing '" + path + "'");
    }
    {
        const std::string path = dir + "/synth_manifest.json";
        std::ofstream out(path, std::ios::binary);
        if (!out) throw DataError("cannot open '" + path + "' for writing");
        nlohmann::ordered_json j;
        j["fingerprint"] = fingerprint;
        j["seed"] = config.seed;
        j["num_products"] = config.num_products;
        j["num_users"] = config.num_users;
        j["num_sessions"] = config.num_sessions;
        j["num_view_tokens"] = config.num_view_tokens;
        j["views_per_product"] = config.views_per_product;
        j["num_brands"] = config.num_brands;
        j["num_categories"] = config.num_categories;
        j["min_prefix"] = config.min_prefix;
        j["max_prefix"] = config.max_prefix;
        j["interactions"] = data.interactions.size();
        out << j.dump(2) << '\n';
        if (!out) throw DataError("failed writing '" + path + "'");
    }
}

}  // namespace reks
