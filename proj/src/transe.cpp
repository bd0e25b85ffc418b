#include "reks/transe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "reks/errors.hpp"

namespace reks {

namespace {

constexpr double kNormFloor = 1e-12;

void normalize_entity_rows(EmbeddingTable& table) {
    for (std::size_t i = 0; i < table.num_entities(); ++i) {
        auto row = table.entity(static_cast<std::uint32_t>(i));
        const double norm = row.norm();
        if (norm > kNormFloor) row /= norm;
    }
}

}  // namespace

EmbeddingTable init_embeddings(std::size_t num_entities, std::size_t dim,
                               std::uint64_t seed) {
    EmbeddingTable table(num_entities, dim);
    const double bound = 6.0 / std::sqrt(static_cast<double>(dim));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(-bound, bound);
    auto& m = table.matrix();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = uniform(rng);
    }
    normalize_entity_rows(table);
    return table;
}

double transe_score(const EmbeddingTable& table, EntityId h, Relation r, EntityId t) {
    return (table.entity(h) + table.relation(r) - table.entity(t)).norm();
}

double transe_pair_loss(const EmbeddingTable& table, const Triple& pos, const Triple& neg,
                        double margin) {
    const double positive = transe_score(table, pos.head, pos.relation, pos.tail);
    const double negative = transe_score(table, neg.head, neg.relation, neg.tail);
    return std::max(0.0, margin + positive - negative);
}

TransePairGrads transe_pair_gradients(const EmbeddingTable& table, const Triple& pos,
                                      const Triple& neg, double margin) {
    TransePairGrads out;
    const Eigen::RowVectorXd up =
        table.entity(pos.head) + table.relation(pos.relation) - table.entity(pos.tail);
    const Eigen::RowVectorXd un =
        table.entity(neg.head) + table.relation(neg.relation) - table.entity(neg.tail);
    const double sp = up.norm();
    const double sn = un.norm();
    out.loss = std::max(0.0, margin + sp - sn);
    if (out.loss <= 0) return out;

    Eigen::RowVectorXd gp = Eigen::RowVectorXd::Zero(up.size());
    Eigen::RowVectorXd gn = Eigen::RowVectorXd::Zero(un.size());
    if (sp > kNormFloor) gp = up / sp;
    if (sn > kNormFloor) gn = un / sn;

    auto add = [&](std::size_t row, const Eigen::RowVectorXd& g) {
        for (auto& [r, acc] : out.rows) {
            if (r == row) {
                acc += g;
                return;
            }
        }
        out.rows.emplace_back(row, g);
    };
    add(pos.head.index, gp);
    add(pos.tail.index, -gp);
    add(table.relation_row(pos.relation), gp);
    add(neg.head.index, -gn);
    add(neg.tail.index, gn);
    add(table.relation_row(neg.relation), -gn);
    return out;
}

std::vector<TranseEpochStats> train_transe(EmbeddingTable& table, const KnowledgeGraph& g,
                                           const TranseConfig& config) {
    if (g.num_triples() == 0) throw DataError("cannot train embeddings on an empty graph");
    if (config.margin <= 0) throw ConfigError("margin must be positive");
    if (config.epochs == 0) throw ConfigError("epochs must be at least 1");
    if (table.num_entities() != g.num_entities()) {
        throw DataError("embedding table does not match the graph's entity count");
    }

    const auto& triples = g.triples();
    const auto n_entities = static_cast<std::uint32_t>(g.num_entities());
    std::mt19937_64 rng(config.seed);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<std::uint32_t> any_entity(0, n_entities - 1);

    auto corrupt = [&](const Triple& t) {
        for (int attempt = 0; attempt < 50; ++attempt) {
            const bool corrupt_head = coin(rng) == 0;
            const EntityId e = g.entity_at(any_entity(rng));
            Triple neg = t;
            (corrupt_head ? neg.head : neg.tail) = e;
            if (!g.has_triple(neg.head, neg.relation, neg.tail)) return neg;
        }
        // Pathologically dense graph: accept a possibly-true corruption.
        Triple neg = t;
        neg.tail = g.entity_at(any_entity(rng));
        return neg;
    };

    std::vector<std::size_t> order(triples.size());
    std::iota(order.begin(), order.end(), 0);

    std::vector<TranseEpochStats> history;
    history.reserve(config.epochs);
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        TranseEpochStats stats;
        double loss_sum = 0.0;
        std::size_t pairs = 0;
        for (const std::size_t ti : order) {
            const Triple& pos = triples[ti];
            for (std::size_t k = 0; k < config.negatives; ++k) {
                const Triple neg = corrupt(pos);
                ++pairs;

                const TransePairGrads grads =
                    transe_pair_gradients(table, pos, neg, config.margin);
                if (grads.loss <= 0) continue;
                loss_sum += grads.loss;
                ++stats.violations;
                for (const auto& [row, g] : grads.rows) {
                    table.matrix().row(static_cast<Eigen::Index>(row)) -= config.lr * g;
                }
            }
        }
        stats.mean_loss = pairs > 0 ? loss_sum / static_cast<double>(pairs) : 0.0;
        normalize_entity_rows(table);
        history.push_back(stats);
    }
    return history;
}

}  // namespace reks
