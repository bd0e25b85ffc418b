#pragma once

#include <cstdint>
#include <optional>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

#include "reks/embedding.hpp"
#include "reks/kg.hpp"

namespace reks {

/// Alternating entity/relation sequence through the graph.
struct Path {
    std::vector<EntityId> entities;   // length = hops + 1
    std::vector<Relation> relations;  // length = hops

    std::size_t hops() const { return relations.size(); }
    EntityId terminal() const { return entities.back(); }
};

struct State {
    Eigen::VectorXd session_vec;                 // session representation
    EntityId entity;                             // current position
    std::optional<Relation> relation;            // edge taken to get here
    std::unordered_set<std::uint32_t> visited;   // excluded from future actions
    Path path;
    std::size_t t = 0;                           // hops taken so far
};

/// t=0 state anchored at the session's last interacted product (or at the
/// session's user when the user-start variant relaxes the kind check).
State initial_state(Eigen::VectorXd session_vec, EntityId start,
                    const KnowledgeGraph& g, bool require_product = true);

/// Deterministic transition; the action must be a legal unvisited edge.
State step(const State& state, const Edge& action, const KnowledgeGraph& g);

/// One affine+tanh layer fusing session and path context, plus the action
/// scoring matrix. Logit of action (r,e) is (x_r + x_e) . (W1 s_t).
struct PolicyParams {
    RowMatrixXd A;         // d2 x (d1+d0)
    Eigen::VectorXd bias;  // d2
    RowMatrixXd W1;        // d0 x d2

    static PolicyParams init(std::size_t d0, std::size_t d1, std::size_t d2,
                             std::uint64_t seed);
    std::size_t d0() const { return static_cast<std::size_t>(W1.rows()); }
    std::size_t d1() const { return static_cast<std::size_t>(A.cols() - W1.rows()); }
    std::size_t d2() const { return static_cast<std::size_t>(A.rows()); }
};

/// Intermediates of one state_vector evaluation, kept for backprop.
struct StateVectorCache {
    Eigen::VectorXd u;  // [S_e ; x_e + x_r]
    Eigen::VectorXd s;  // tanh(A u + bias)
};

/// s_t = tanh(A (S_e concat S_p) + bias), S_p = x_e + x_r (x_r = 0 at t=0).
Eigen::VectorXd state_vector(const State& state, const PolicyParams& params,
                             const EmbeddingTable& table,
                             StateVectorCache* cache = nullptr);

struct ActionDistribution {
    Eigen::VectorXd logits;
    Eigen::VectorXd probs;      // softmax over the provided action list
    Eigen::VectorXd log_probs;
};

/// Masked softmax over the legal actions. Empty action lists are a dead end
/// the caller must handle before scoring; passing one throws.
ActionDistribution action_distribution(const Eigen::VectorXd& s_t,
                                       const std::vector<Edge>& actions,
                                       const PolicyParams& params,
                                       const EmbeddingTable& table);

/// Ablation switches for the three reward components.
struct RewardConfig {
    bool item_level = true;
    bool rank_level = true;
    bool path_level = true;
};

struct RewardBreakdown {
    double item = 0.0;   // in [0,1]
    double rank = 0.0;   // exponent, in [0,1]; the reward term is 2^rank
    double path = 0.0;   // in (0,1)
    double total = 0.0;  // enabled components summed; full config: item + 2^rank + path
};

/// Terminal reward. rank is the 0-based position of the terminal entity in
/// the episode batch's candidate ranking; absent for non-product terminals.
/// The path-level term needs dim(S_e) == embedding dim.
RewardBreakdown reward(EntityId terminal, const Path& path,
                       const Eigen::VectorXd& session_vec, EntityId target,
                       std::optional<std::size_t> rank, const EmbeddingTable& table,
                       const RewardConfig& config = {});

}  // namespace reks
