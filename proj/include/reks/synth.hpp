#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reks/ingest.hpp"

namespace reks {

/// Generator settings for the synthetic successor-rule dataset.
///
/// Every product i has a hidden successor next_of[i] (a fixed cyclic
/// permutation, never the product itself). A shared link token connects the
/// two: it appears in product i's bought_together list and in the
/// successor's also_bought list, so the token entity bridges them with
/// distinct relations in each direction. Each raw session is a random
/// product prefix whose final interaction is the successor of the item
/// before it; a recommender therefore scores perfectly by following the
/// bought_together edge of the last prefix item and stepping onward.
/// Brand, category, view-token, co-occurrence, and purchase edges provide
/// plausible-looking alternative paths the policy must learn to ignore.
struct SynthConfig {
    std::size_t num_products = 200;
    std::size_t num_users = 50;
    std::size_t num_sessions = 700;
    std::size_t num_view_tokens = 50;   // shared also_viewed distractor tokens
    std::size_t views_per_product = 3;  // distinct view tokens per product
    std::size_t num_brands = 20;
    std::size_t num_categories = 20;
    std::size_t min_prefix = 2;  // random prefix length bounds, inclusive
    std::size_t max_prefix = 4;
    std::uint64_t seed = 7;
};

struct SynthDataset {
    std::vector<Interaction> interactions;
    std::vector<ItemMetadata> metadata;
    std::vector<std::uint32_t> next_of;  // the hidden successor permutation
};

/// Deterministic for a given config (single RNG stream, fixed draw order).
SynthDataset make_synth_dataset(const SynthConfig& config);

/// Writes interactions.tsv, metadata.jsonl, and synth_manifest.json into
/// `dir` (which must already exist).
void write_synth_dataset(const SynthDataset& data, const SynthConfig& config,
                         const std::string& dir, const std::string& fingerprint);

}  // namespace reks
