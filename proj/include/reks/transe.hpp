#pragma once

#include <cstdint>
#include <vector>

#include "reks/embedding.hpp"
#include "reks/kg.hpp"

namespace reks {

struct TranseConfig {
    std::size_t dim = 400;
    double margin = 1.0;        // hinge margin
    double lr = 0.01;
    std::size_t epochs = 30;
    std::size_t negatives = 1;  // corrupted samples per positive
    std::uint64_t seed = 0;
};

struct TranseEpochStats {
    double mean_loss = 0.0;        // mean hinge over (positive, negative) pairs
    std::size_t violations = 0;    // pairs with nonzero hinge
};

/// Uniform init in [-6/sqrt(dim), +6/sqrt(dim)], then entity rows L2-normalized.
EmbeddingTable init_embeddings(std::size_t num_entities, std::size_t dim,
                               std::uint64_t seed);

/// ||x_h + x_r - x_t||_2
double transe_score(const EmbeddingTable& table, EntityId h, Relation r, EntityId t);

/// Margin loss over one (positive, corrupted) pair: max(0, margin + s+ - s-).
double transe_pair_loss(const EmbeddingTable& table, const Triple& pos, const Triple& neg,
                        double margin);

struct TransePairGrads {
    double loss = 0.0;
    /// (embedding row index, dL/d row); rows shared between the positive and
    /// negative triple appear once with their gradients summed.
    std::vector<std::pair<std::size_t, Eigen::RowVectorXd>> rows;
};

/// Analytic gradient of transe_pair_loss w.r.t. every involved embedding row.
TransePairGrads transe_pair_gradients(const EmbeddingTable& table, const Triple& pos,
                                      const Triple& neg, double margin);

/// SGD over per-triple hinge losses with uniform head-or-tail corruption
/// (corruptions that form true triples are resampled, capped at 50 tries).
/// Entity rows are re-normalized to unit L2 at the end of every epoch.
std::vector<TranseEpochStats> train_transe(EmbeddingTable& table, const KnowledgeGraph& g,
                                           const TranseConfig& config);

}  // namespace reks
