#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "reks/encoder.hpp"
#include "reks/synth.hpp"
#include "reks/train.hpp"
#include "reks/transe.hpp"

namespace reks {

/// Full run configuration: file locations plus every stage's settings.
/// Loaded from a flat `key = value` text file and overridable per key.
struct RunConfig {
    // Paths. Empty interactions/metadata resolve into the work directory,
    // which is where the synth stage writes them.
    std::string workdir = "out";
    std::string interactions;  // default: <workdir>/interactions.tsv
    std::string metadata;      // default: <workdir>/metadata.jsonl

    // Model dimensions: embeddings (d0), session vector (d1), fused state (d2).
    std::size_t d0 = 32;
    std::size_t d1 = 32;
    std::size_t d2 = 32;
    EncoderKind encoder = EncoderKind::gru;
    double dropout = 0.0;

    // Ingest.
    int min_item_count = 1;
    std::array<double, 3> split = {0.75, 0.10, 0.15};
    bool user_info = true;

    // Embedding pretraining.
    double transe_margin = 1.0;
    double transe_lr = 0.05;
    std::size_t transe_epochs = 10;
    std::size_t transe_negatives = 1;

    // Policy training.
    std::size_t path_length = 2;
    std::size_t p1 = 100;  // first-hop width
    std::size_t p2 = 1;    // width of every later hop
    double gamma = 0.99;
    double beta = 0.2;
    double lr = 0.01;
    std::size_t batch_size = 64;
    std::size_t epochs = 30;
    double baseline_decay = 0.9;
    std::string optimizer = "adam";
    std::string loss = "both";  // both | reinforce | cross_entropy
    std::string reward = "full";  // full | item | item_rank | item_path
    std::string start = "last_item";
    std::size_t top_k = 20;  // recommendation list length

    // Evaluation.
    std::vector<std::size_t> topk = {5, 10, 20};
    bool filter_seen = false;
    std::size_t paths_per_item = 1;  // explanation paths listed per recommended item

    // Synthetic benchmark generator.
    std::size_t synth_products = 200;
    std::size_t synth_users = 50;
    std::size_t synth_sessions = 700;

    std::uint64_t seed = 7;

    /// Applies one `key = value` assignment; throws ConfigError for unknown
    /// keys or unparsable values.
    void set(const std::string& key, const std::string& value);

    /// Cross-field checks (dimension ties, enum values, ranges).
    void validate() const;

    /// Every semantic field in a fixed order, one `key=value` per line;
    /// paths are excluded so artifact bytes do not depend on placement.
    std::string canonical_string() const;

    /// FNV-1a 64-bit hash of canonical_string(), as 16 hex digits.
    std::string fingerprint() const;

    // Derived settings for stage code.
    std::string interactions_path() const;
    std::string metadata_path() const;
    std::vector<std::size_t> beam_widths() const;  // {p1, p2, p2, ...}
    TranseConfig transe_config() const;
    TrainConfig train_config() const;
    SynthConfig synth_config() const;
};

/// Parses a flat config file: `key = value` lines, `#` comments, blank
/// lines ignored. Throws ConfigError with the line number on bad syntax.
RunConfig load_config(const std::string& path);
RunConfig parse_config(std::istream& in);

/// Replaces the seed with REKS_SEED when that env var is set; throws
/// ConfigError if it is set but not a non-negative integer.
void apply_env_seed(RunConfig& config);

/// FNV-1a 64-bit hash, exposed for tests.
std::uint64_t fnv1a64(std::string_view text);

}  // namespace reks
