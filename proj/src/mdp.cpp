#include "reks/mdp.hpp"

#include <cmath>
#include <random>

#include "reks/errors.hpp"

namespace reks {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

State initial_state(Eigen::VectorXd session_vec, EntityId start,
                    const KnowledgeGraph& g, bool require_product) {
    if (!g.has_entity(start)) {
        throw DataError("path start entity is not in the knowledge graph");
    }
    if (require_product && !is_product(start)) {
        throw DataError("path reasoning must start at a product entity");
    }
    State s;
    s.session_vec = std::move(session_vec);
    s.entity = start;
    s.visited = {start.index};
    s.path.entities = {start};
    s.t = 0;
    return s;
}

State step(const State& state, const Edge& action, const KnowledgeGraph& g) {
    if (state.visited.count(action.tail.index) > 0 ||
        !g.has_triple(state.entity, action.relation, action.tail)) {
        throw DataError("illegal action: not an unvisited out-edge of the current entity");
    }
    State next = state;
    next.entity = action.tail;
    next.relation = action.relation;
    next.visited.insert(action.tail.index);
    next.path.entities.push_back(action.tail);
    next.path.relations.push_back(action.relation);
    next.t = state.t + 1;
    return next;
}

PolicyParams PolicyParams::init(std::size_t d0, std::size_t d1, std::size_t d2,
                                std::uint64_t seed) {
    if (d0 == 0 || d1 == 0 || d2 == 0) {
        throw ConfigError("policy dimensions must be positive");
    }
    PolicyParams p;
    std::mt19937_64 rng(seed);
    auto fill = [&](RowMatrixXd& m, double bound) {
        std::uniform_real_distribution<double> uniform(-bound, bound);
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = uniform(rng);
        }
    };
    p.A.resize(static_cast<Eigen::Index>(d2), static_cast<Eigen::Index>(d1 + d0));
    fill(p.A, 1.0 / std::sqrt(static_cast<double>(d1 + d0)));
    p.bias = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d2));
    p.W1.resize(static_cast<Eigen::Index>(d0), static_cast<Eigen::Index>(d2));
    fill(p.W1, 1.0 / std::sqrt(static_cast<double>(d2)));
    return p;
}

Eigen::VectorXd state_vector(const State& state, const PolicyParams& params,
                             const EmbeddingTable& table, StateVectorCache* cache) {
    const auto d0 = static_cast<Eigen::Index>(params.d0());
    const auto d1 = static_cast<Eigen::Index>(params.d1());
    if (state.session_vec.size() != d1) {
        throw DataError("session vector does not match the policy's fused-state layer");
    }
    Eigen::VectorXd u(d1 + d0);
    u.head(d1) = state.session_vec;
    u.tail(d0) = table.entity(state.entity).transpose();
    if (state.relation) u.tail(d0) += table.relation(*state.relation).transpose();
    Eigen::VectorXd s = (params.A * u + params.bias).array().tanh();
    if (cache) {
        cache->u = u;
        cache->s = s;
    }
    return s;
}

ActionDistribution action_distribution(const Eigen::VectorXd& s_t,
                                       const std::vector<Edge>& actions,
                                       const PolicyParams& params,
                                       const EmbeddingTable& table) {
    if (actions.empty()) throw DataError("cannot score an empty action list");
    const Eigen::VectorXd q = params.W1 * s_t;
    ActionDistribution dist;
    dist.logits.resize(static_cast<Eigen::Index>(actions.size()));
    for (std::size_t i = 0; i < actions.size(); ++i) {
        dist.logits[static_cast<Eigen::Index>(i)] =
            (table.relation(actions[i].relation) + table.entity(actions[i].tail)).dot(q);
    }
    const double shift = dist.logits.maxCoeff();
    const Eigen::VectorXd shifted = dist.logits.array() - shift;
    const Eigen::VectorXd expd = shifted.array().exp();
    const double z = expd.sum();
    dist.probs = expd / z;
    dist.log_probs = shifted.array() - std::log(z);
    return dist;
}

RewardBreakdown reward(EntityId terminal, const Path& path,
                       const Eigen::VectorXd& session_vec, EntityId target,
                       std::optional<std::size_t> rank, const EmbeddingTable& table,
                       const RewardConfig& config) {
    RewardBreakdown r;

    if (terminal.index == target.index) {
        r.item = 1.0;
    } else if (is_product(terminal)) {
        r.item = sigmoid(table.entity(terminal).dot(table.entity(target)));
    }

    if (is_product(terminal) && rank.has_value()) {
        r.rank = 1.0 / std::log2(static_cast<double>(*rank) + 2.0);
    }

    if (config.path_level) {
        if (session_vec.size() != static_cast<Eigen::Index>(table.dim())) {
            throw DataError(
                "path-level reward needs the session vector and embeddings to share a "
                "dimension");
        }
        Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(session_vec.size());
        for (const EntityId e : path.entities) sum += table.entity(e);
        for (const Relation rel : path.relations) sum += table.relation(rel);
        const double rows =
            static_cast<double>(path.entities.size() + path.relations.size());
        r.path = sigmoid((sum / rows).dot(session_vec));
    }

    r.total = (config.item_level ? r.item : 0.0) +
              (config.rank_level ? std::exp2(r.rank) : 0.0) +
              (config.path_level ? r.path : 0.0);
    return r;
}

}  // namespace reks
