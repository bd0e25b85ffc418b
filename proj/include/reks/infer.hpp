#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "reks/embedding.hpp"
#include "reks/ingest.hpp"
#include "reks/kg.hpp"
#include "reks/mdp.hpp"
#include "reks/train.hpp"

namespace reks {

struct ScoredPath {
    Path path;
    std::vector<double> step_probs;  // each under the full masked softmax
    double overall = 1.0;            // product of step probabilities
};

struct Recommendation {
    EntityId item;
    double score = 0.0;              // summed overall probability across paths
    ScoredPath explanation;          // the item's highest-probability path
    std::vector<ScoredPath> paths;   // every path reaching the item, most probable first
};

struct RankedRecommendation {
    std::vector<Recommendation> items;  // descending score, ties by entity index
};

/// Width-limited deterministic expansion: at step t each surviving branch
/// keeps its widths[t] most probable actions (ties by action order). Only
/// branches that reach the full horizon survive.
std::vector<ScoredPath> beam_search(const KnowledgeGraph& g, const EmbeddingTable& table,
                                    const PolicyParams& policy,
                                    const Eigen::VectorXd& session_vec, EntityId start,
                                    const std::vector<std::size_t>& widths,
                                    bool require_product_start = true);

/// Aggregates product-terminal paths into a top-K list. `exclude` drops
/// items by entity index (e.g. items already in the session).
RankedRecommendation recommend(const std::vector<ScoredPath>& paths, std::size_t k,
                               const std::unordered_set<std::uint32_t>* exclude = nullptr);

/// entity index -> display token; entities missing from the map render as
/// `kind:index`.
using LabelMap = std::unordered_map<std::uint32_t, std::string>;

/// `e0 -[r1]-> e1 -[r2]-> e2`
std::string render_explanation(const Path& path, const LabelMap* labels = nullptr);

/// Inverse of the unlabeled rendering (`kind:index` tokens only).
Path parse_explanation(const std::string& text);

/// Builds the `kind:raw_id` label map for every entity of the graph.
LabelMap graph_labels(const KnowledgeGraph& g);

struct InferConfig {
    std::vector<std::size_t> widths = {100, 1};
    std::size_t top_k = 20;
    StartMode start = StartMode::last_item;
    bool filter_seen = false;
};

struct SessionRecommendation {
    bool skipped = false;  // prefix item, user, or start entity missing from the KG
    RankedRecommendation ranked;
};

/// Full per-session inference: encode the prefix (dropout off), beam, rank.
SessionRecommendation recommend_for_session(const KnowledgeGraph& g,
                                            const EmbeddingTable& table,
                                            PolicyModel& model, const Session& session,
                                            const InferConfig& config);

}  // namespace reks
