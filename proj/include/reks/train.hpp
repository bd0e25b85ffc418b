#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "reks/encoder.hpp"
#include "reks/ingest.hpp"
#include "reks/kg.hpp"
#include "reks/mdp.hpp"

namespace reks {

enum class StartMode { last_item, user };

std::optional<StartMode> start_mode_from_string(std::string_view s);
std::string_view to_string(StartMode m);

struct TrainConfig {
    std::size_t path_length = 2;
    std::vector<std::size_t> widths = {100, 1};  // per-step sampling sizes
    double gamma = 0.99;                         // discount factor
    double beta = 0.2;                           // policy-loss weight in the combined loss
    double lr = 0.001;
    std::size_t batch_size = 256;
    std::size_t epochs = 30;
    double dropout = 0.0;
    double baseline_decay = 0.9;
    std::string optimizer = "sgd";  // "sgd" | "adam"
    std::uint64_t seed = 0;
    RewardConfig reward;
    bool loss_reinforce = true;      // disabling reproduces the CE-only variant
    bool loss_cross_entropy = true;  // disabling reproduces the reward-only variant
    StartMode start = StartMode::last_item;

    void validate() const;
    /// L_r is weighted by beta only while both losses are active; a lone
    /// reinforce loss trains unscaled.
    double reinforce_weight() const;
    double cross_entropy_weight() const { return loss_cross_entropy ? 1.0 : 0.0; }
};

/// One sampled trajectory plus everything backprop needs to revisit it.
struct StepTrace {
    std::vector<Edge> actions;   // legal actions, graph order
    std::size_t chosen = 0;      // index into actions
    StateVectorCache sv;         // fused-state intermediates
    Eigen::VectorXd probs;       // masked softmax over actions
    double log_prob = 0.0;       // log probs[chosen]
};

struct Episode {
    Path path;
    std::vector<StepTrace> steps;
    bool dead_end = false;             // ran out of actions before the horizon
    double log_prob_sum = 0.0;
    std::optional<std::size_t> rank;   // 0-based among session candidates
    RewardBreakdown reward;            // zeroed for dead ends
    double ret = 0.0;                  // gamma^(hops-1) * reward.total
};

/// Candidate products of one session's episode batch, ranked by raw score
/// (summed path probability), descending, ties by ascending entity index.
struct ItemScores {
    std::vector<std::uint32_t> items;  // entity indices, rank order
    Eigen::VectorXd raw;
    Eigen::VectorXd normalized;        // raw / max(raw), so the top item is 1

    std::optional<std::size_t> position_of(std::uint32_t item) const;
};

/// Weighted sample of k distinct indices from a categorical distribution;
/// if k >= probs.size() every index is returned in order.
std::vector<std::size_t> sample_without_replacement(const Eigen::VectorXd& probs,
                                                    std::size_t k,
                                                    std::mt19937_64& rng);

/// Policy network bundle: encoder, fused-state layer, and action scorer,
/// with gradient buffers mirroring every parameter.
struct PolicyModel {
    EncoderKind encoder_kind = EncoderKind::gru;
    std::unique_ptr<SessionEncoder> encoder;
    PolicyParams policy;
    PolicyParams policy_grad;
    double dropout = 0.0;

    static PolicyModel create(EncoderKind kind, std::size_t d0, std::size_t d1,
                              std::size_t d2, double dropout, std::uint64_t seed);

    std::size_t d0() const { return policy.d0(); }
    std::size_t d1() const { return policy.d1(); }
    std::size_t d2() const { return policy.d2(); }

    std::vector<ParamView> param_views();
    void zero_grad();
};

struct Checkpoint {
    PolicyModel model;
    double baseline = 0.0;
    std::string rng_state;
    std::uint64_t seed = 0;
    std::string fingerprint;
};

void save_checkpoint(const std::string& path, PolicyModel& model, double baseline,
                     const std::string& rng_state, std::uint64_t seed,
                     const std::string& fingerprint);
Checkpoint load_checkpoint(const std::string& path);

/// Samples the per-session episode batch under the current policy; records
/// log-probs under the full masked softmax. Empty result = start is a dead
/// end (the caller counts the skip).
std::vector<Episode> rollout_batch(const KnowledgeGraph& g, const EmbeddingTable& table,
                                   const PolicyParams& policy,
                                   const Eigen::VectorXd& session_vec, EntityId start,
                                   const TrainConfig& config, std::mt19937_64& rng);

/// Aggregates episode terminals into candidate scores and writes each
/// product-terminal episode's rank back into it.
ItemScores score_items(std::vector<Episode>& episodes);

/// Fills reward and discounted return on every episode (zero for dead ends).
void assign_rewards(std::vector<Episode>& episodes, const Eigen::VectorXd& session_vec,
                    EntityId target, const EmbeddingTable& table,
                    const RewardConfig& config, double gamma);

struct ReinforceLoss {
    double value = 0.0;
    std::vector<double> coeff;  // d(loss)/d(log-prob sum) per episode
};

/// -mean over episodes of (G - baseline) * sum(log pi); returns the
/// per-episode upstream coefficients for backprop.
ReinforceLoss reinforce_loss(const std::vector<Episode>& episodes, double baseline);

struct CrossEntropyLoss {
    double value = 0.0;
    Eigen::VectorXd d_raw;  // d(loss)/d(raw score), aligned with ItemScores
};

/// One candidate's term: -(y log ŷ + (1-y) log(1-ŷ)) with ŷ clamped to
/// [eps, 1-eps], eps = 1e-7.
double binary_cross_entropy(double yhat, double y);

/// Binary cross-entropy over candidates with the target as the positive;
/// scores are max-normalized then clamped to [eps, 1-eps] (eps = 1e-7, no
/// gradient through an active clamp).
CrossEntropyLoss cross_entropy_loss(const ItemScores& scores, std::uint32_t target_item);

struct TrainReport {
    std::size_t epoch = 0;
    double loss_reinforce = 0.0;
    double loss_cross_entropy = 0.0;
    double loss_total = 0.0;
    double mean_reward = 0.0;        // mean terminal reward over episodes
    std::size_t skipped_sessions = 0;  // start missing from KG or dead-ended
    std::size_t ce_skipped = 0;        // target not among the session's candidates
    std::size_t episodes = 0;
    std::size_t sessions = 0;
};

/// Everything one batch produced; exposed so tests can freeze trajectories
/// and finite-difference the combined loss.
struct SessionTrace {
    bool skipped = false;
    bool ce_eligible = false;
    std::vector<std::uint32_t> prefix_rows;
    EntityId start{};
    std::uint32_t target_row = 0;
    Eigen::VectorXd session_vec;
    EncoderCache enc_cache;
    std::vector<Episode> episodes;
    ItemScores scores;
    Eigen::VectorXd ce_d_raw;  // empty unless ce_eligible
};

struct BatchResult {
    std::vector<SessionTrace> sessions;
    double loss_reinforce = 0.0;
    double loss_cross_entropy = 0.0;
    double loss_total = 0.0;
    double baseline_used = 0.0;
    double mean_return = 0.0;   // over episodes, before the baseline update
    double mean_reward = 0.0;
    std::size_t episodes = 0;
    std::size_t ce_sessions = 0;
    std::size_t skipped = 0;
};

class Trainer {
public:
    Trainer(const KnowledgeGraph& g, const EmbeddingTable& table, PolicyModel& model,
            TrainConfig config);

    /// Shuffles, then runs one optimizer step per batch.
    TrainReport run_epoch(const std::vector<Session>& sessions);

    /// Rolls out and backpropagates one explicit batch; does not step the
    /// optimizer or move the baseline.
    BatchResult process_batch(const std::vector<const Session*>& batch,
                              bool accumulate_grads);

    void apply_update();
    void update_baseline(double mean_return);

    double baseline() const { return baseline_; }
    std::mt19937_64& rng() { return rng_; }
    const TrainConfig& config() const { return config_; }

private:
    const KnowledgeGraph& g_;
    const EmbeddingTable& table_;
    PolicyModel& model_;
    TrainConfig config_;
    std::mt19937_64 rng_;
    double baseline_ = 0.0;
    std::unique_ptr<class Optimizer> optimizer_;
    std::size_t epoch_ = 0;
};

class Optimizer {
public:
    virtual ~Optimizer() = default;
    virtual void step(const std::vector<ParamView>& views) = 0;
};

std::unique_ptr<Optimizer> make_optimizer(const std::string& name, double lr);

}  // namespace reks
