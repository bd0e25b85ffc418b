#include "reks/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>
#include <unordered_map>

#include "reks/errors.hpp"

namespace reks {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("'" + key + "' expects true/false, got '" + value + "'");
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    std::uint64_t out = 0;
    try {
        out = std::stoull(value, &used);
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "' expects a non-negative integer, got '" + value + "'");
    }
    if (used != value.size() || value[0] == '-') {
        throw ConfigError("'" + key + "' expects a non-negative integer, got '" + value + "'");
    }
    return out;
}

std::size_t parse_size(const std::string& key, const std::string& value) {
    return static_cast<std::size_t>(parse_u64(key, value));
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(value, &used);
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "' expects a number, got '" + value + "'");
    }
    if (used != value.size()) {
        throw ConfigError("'" + key + "' expects a number, got '" + value + "'");
    }
    return out;
}

std::vector<std::string> split_commas(const std::string& value) {
    std::vector<std::string> parts;
    std::string token;
    std::istringstream in(value);
    while (std::getline(in, token, ',')) parts.push_back(trim(token));
    return parts;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
    if (key == "workdir") { workdir = value; return; }
    if (key == "interactions") { interactions = value; return; }
    if (key == "metadata") { metadata = value; return; }
    if (key == "d0") { d0 = parse_size(key, value); return; }
    if (key == "d1") { d1 = parse_size(key, value); return; }
    if (key == "d2") { d2 = parse_size(key, value); return; }
    if (key == "encoder") {
        const auto kind = encoder_kind_from_string(value);
        if (!kind) throw ConfigError("unknown encoder '" + value + "'");
        encoder = *kind;
        return;
    }
    if (key == "dropout") { dropout = parse_double(key, value); return; }
    if (key == "min_item_count") {
        min_item_count = static_cast<int>(parse_u64(key, value));
        return;
    }
    if (key == "split") {
        const auto parts = split_commas(value);
        if (parts.size() != 3) throw ConfigError("'split' expects three ratios");
        for (std::size_t i = 0; i < 3; ++i) split[i] = parse_double(key, parts[i]);
        return;
    }
    if (key == "user_info") { user_info = parse_bool(key, value); return; }
    if (key == "transe_margin") { transe_margin = parse_double(key, value); return; }
    if (key == "transe_lr") { transe_lr = parse_double(key, value); return; }
    if (key == "transe_epochs") { transe_epochs = parse_size(key, value); return; }
    if (key == "transe_negatives") { transe_negatives = parse_size(key, value); return; }
    if (key == "path_length") { path_length = parse_size(key, value); return; }
    if (key == "p1") { p1 = parse_size(key, value); return; }
    if (key == "p2") { p2 = parse_size(key, value); return; }
    if (key == "gamma") { gamma = parse_double(key, value); return; }
    if (key == "beta") { beta = parse_double(key, value); return; }
    if (key == "lr") { lr = parse_double(key, value); return; }
    if (key == "batch_size") { batch_size = parse_size(key, value); return; }
    if (key == "epochs") { epochs = parse_size(key, value); return; }
    if (key == "baseline_decay") { baseline_decay = parse_double(key, value); return; }
    if (key == "optimizer") { optimizer = value; return; }
    if (key == "loss") { loss = value; return; }
    if (key == "reward") { reward = value; return; }
    if (key == "start") { start = value; return; }
    if (key == "top_k") { top_k = parse_size(key, value); return; }
    if (key == "topk") {
        const auto parts = split_commas(value);
        if (parts.empty()) throw ConfigError("'topk' expects at least one cutoff");
        topk.clear();
        for (const auto& p : parts) topk.push_back(parse_size(key, p));
        return;
    }
    if (key == "filter_seen") { filter_seen = parse_bool(key, value); return; }
    if (key == "paths_per_item") { paths_per_item = parse_size(key, value); return; }
    if (key == "synth_products") { synth_products = parse_size(key, value); return; }
    if (key == "synth_users") { synth_users = parse_size(key, value); return; }
    if (key == "synth_sessions") { synth_sessions = parse_size(key, value); return; }
    if (key == "seed") { seed = parse_u64(key, value); return; }
    throw ConfigError("unknown config key '" + key + "'");
}

void RunConfig::validate() const {
    if (d0 == 0 || d1 == 0 || d2 == 0) throw ConfigError("dimensions must be positive");
    if (encoder == EncoderKind::mean_pool && d1 != d0) {
        throw ConfigError("the mean-pool encoder requires d1 == d0");
    }
    if (start != "last_item" && start != "user") {
        throw ConfigError("'start' must be last_item or user");
    }
    if (loss != "both" && loss != "reinforce" && loss != "cross_entropy") {
        throw ConfigError("'loss' must be both, reinforce, or cross_entropy");
    }
    if (reward != "full" && reward != "item" && reward != "item_rank" &&
        reward != "item_path") {
        throw ConfigError("'reward' must be full, item, item_rank, or item_path");
    }
    if (reward == "full" || reward == "item_path") {
        if (d1 != d0) throw ConfigError("the path-level reward requires d1 == d0");
    }
    if (topk.empty()) throw ConfigError("'topk' must list at least one cutoff");
    for (std::size_t k : topk) {
        if (k == 0) throw ConfigError("'topk' cutoffs must be positive");
    }
    if (top_k == 0) throw ConfigError("'top_k' must be positive");
    if (paths_per_item == 0) throw ConfigError("'paths_per_item' must be positive");
    if (p1 == 0 || p2 == 0) throw ConfigError("beam widths must be positive");
    double ratio_sum = split[0] + split[1] + split[2];
    if (std::abs(ratio_sum - 1.0) > 1e-9) {
        throw ConfigError("'split' ratios must sum to 1");
    }
    if (transe_margin <= 0 || transe_lr <= 0 || transe_epochs == 0 || transe_negatives == 0) {
        throw ConfigError("embedding pretraining settings must be positive");
    }
    train_config().validate();  // path_length/widths/gamma/beta/lr/optimizer checks
}

std::string RunConfig::canonical_string() const {
    std::string out;
    auto add = [&out](const std::string& key, const std::string& value) {
        out += key;
        out += '=';
        out += value;
        out += '\n';
    };
    add("d0", std::to_string(d0));
    add("d1", std::to_string(d1));
    add("d2", std::to_string(d2));
    add("encoder", std::string(to_string(encoder)));
    add("dropout", format_double(dropout));
    add("min_item_count", std::to_string(min_item_count));
    add("split", format_double(split[0]) + "," + format_double(split[1]) + "," +
                     format_double(split[2]));
    add("user_info", user_info ? "true" : "false");
    add("transe_margin", format_double(transe_margin));
    add("transe_lr", format_double(transe_lr));
    add("transe_epochs", std::to_string(transe_epochs));
    add("transe_negatives", std::to_string(transe_negatives));
    add("path_length", std::to_string(path_length));
    add("p1", std::to_string(p1));
    add("p2", std::to_string(p2));
    add("gamma", format_double(gamma));
    add("beta", format_double(beta));
    add("lr", format_double(lr));
    add("batch_size", std::to_string(batch_size));
    add("epochs", std::to_string(epochs));
    add("baseline_decay", format_double(baseline_decay));
    add("optimizer", optimizer);
    add("loss", loss);
    add("reward", reward);
    add("start", start);
    add("top_k", std::to_string(top_k));
    {
        std::string list;
        for (std::size_t i = 0; i < topk.size(); ++i) {
            if (i) list += ',';
            list += std::to_string(topk[i]);
        }
        add("topk", list);
    }
    add("filter_seen", filter_seen ? "true" : "false");
    add("paths_per_item", std::to_string(paths_per_item));
    add("synth_products", std::to_string(synth_products));
    add("synth_users", std::to_string(synth_users));
    add("synth_sessions", std::to_string(synth_sessions));
    add("seed", std::to_string(seed));
    return out;
}

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

std::string RunConfig::fingerprint() const {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canonical_string())));
    return buf;
}

std::string RunConfig::interactions_path() const {
    return interactions.empty() ? workdir + "/interactions.tsv" : interactions;
}

std::string RunConfig::metadata_path() const {
    return metadata.empty() ? workdir + "/metadata.jsonl" : metadata;
}

std::vector<std::size_t> RunConfig::beam_widths() const {
    std::vector<std::size_t> widths(path_length, p2);
    widths[0] = p1;
    return widths;
}

TranseConfig RunConfig::transe_config() const {
    TranseConfig c;
    c.dim = d0;
    c.margin = transe_margin;
    c.lr = transe_lr;
    c.epochs = transe_epochs;
    c.negatives = transe_negatives;
    c.seed = seed;
    return c;
}

TrainConfig RunConfig::train_config() const {
    TrainConfig c;
    c.path_length = path_length;
    c.widths = beam_widths();
    c.gamma = gamma;
    c.beta = beta;
    c.lr = lr;
    c.batch_size = batch_size;
    c.epochs = epochs;
    c.dropout = dropout;
    c.baseline_decay = baseline_decay;
    c.optimizer = optimizer;
    c.seed = seed;
    c.reward.item_level = true;
    c.reward.rank_level = reward == "full" || reward == "item_rank";
    c.reward.path_level = reward == "full" || reward == "item_path";
    c.loss_reinforce = loss != "cross_entropy";
    c.loss_cross_entropy = loss != "reinforce";
    if (start == "user") c.start = StartMode::user;
    return c;
}

SynthConfig RunConfig::synth_config() const {
    SynthConfig c;
    c.num_products = synth_products;
    c.num_users = synth_users;
    c.num_sessions = synth_sessions;
    c.seed = seed;
    return c;
}

RunConfig parse_config(std::istream& in) {
    RunConfig config;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected 'key = value'");
        }
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        }
        try {
            config.set(key, value);
        } catch (const ConfigError& e) {
            throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in);
}

void apply_env_seed(RunConfig& config) {
    const char* env = std::getenv("REKS_SEED");
    if (env == nullptr || *env == '\0') return;
    config.seed = parse_u64("REKS_SEED", env);
}

}  // namespace reks
