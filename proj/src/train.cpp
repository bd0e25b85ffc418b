#include "reks/train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "reks/errors.hpp"
#include "reks/io.hpp"

namespace reks {

std::optional<StartMode> start_mode_from_string(std::string_view s) {
    if (s == "last_item") return StartMode::last_item;
    if (s == "user") return StartMode::user;
    return std::nullopt;
}

std::string_view to_string(StartMode m) {
    return m == StartMode::last_item ? "last_item" : "user";
}

void TrainConfig::validate() const {
    if (path_length == 0) throw ConfigError("path length must be at least 1");
    if (widths.size() != path_length) {
        throw ConfigError("need one sampling width per path step (" +
                          std::to_string(path_length) + "), got " +
                          std::to_string(widths.size()));
    }
    for (const auto w : widths) {
        if (w == 0) throw ConfigError("sampling widths must be positive");
    }
    if (gamma <= 0.0 || gamma > 1.0) throw ConfigError("discount factor must be in (0, 1]");
    if (beta < 0.0) throw ConfigError("loss weight beta must be nonnegative");
    if (lr <= 0.0) throw ConfigError("learning rate must be positive");
    if (batch_size == 0) throw ConfigError("batch size must be positive");
    if (epochs == 0) throw ConfigError("epochs must be at least 1");
    if (dropout < 0.0 || dropout >= 1.0) throw ConfigError("dropout must lie in [0, 1)");
    if (baseline_decay < 0.0 || baseline_decay >= 1.0) {
        throw ConfigError("baseline decay must lie in [0, 1)");
    }
    if (optimizer != "sgd" && optimizer != "adam") {
        throw ConfigError("optimizer must be 'sgd' or 'adam'");
    }
    if (!loss_reinforce && !loss_cross_entropy) {
        throw ConfigError("at least one loss component must stay enabled");
    }
}

double TrainConfig::reinforce_weight() const {
    if (!loss_reinforce) return 0.0;
    return loss_cross_entropy ? beta : 1.0;
}

std::vector<std::size_t> sample_without_replacement(const Eigen::VectorXd& probs,
                                                    std::size_t k,
                                                    std::mt19937_64& rng) {
    const auto n = static_cast<std::size_t>(probs.size());
    std::vector<std::size_t> picked;
    if (k >= n) {
        picked.resize(n);
        std::iota(picked.begin(), picked.end(), 0);
        return picked;
    }
    std::vector<bool> taken(n, false);
    double remaining = probs.sum();
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    picked.reserve(k);
    for (std::size_t draw = 0; draw < k; ++draw) {
        double ticket = uniform(rng) * remaining;
        std::size_t choice = n;  // falls back to the last free slot
        for (std::size_t i = 0; i < n; ++i) {
            if (taken[i]) continue;
            ticket -= probs[static_cast<Eigen::Index>(i)];
            choice = i;
            if (ticket <= 0.0) break;
        }
        taken[choice] = true;
        remaining -= probs[static_cast<Eigen::Index>(choice)];
        picked.push_back(choice);
    }
    return picked;
}

PolicyModel PolicyModel::create(EncoderKind kind, std::size_t d0, std::size_t d1,
                                std::size_t d2, double dropout, std::uint64_t seed) {
    PolicyModel m;
    m.encoder_kind = kind;
    m.encoder = make_encoder(kind, d0, d1, dropout, seed);
    m.policy = PolicyParams::init(d0, d1, d2, seed + 1);
    m.policy_grad.A = RowMatrixXd::Zero(m.policy.A.rows(), m.policy.A.cols());
    m.policy_grad.bias = Eigen::VectorXd::Zero(m.policy.bias.size());
    m.policy_grad.W1 = RowMatrixXd::Zero(m.policy.W1.rows(), m.policy.W1.cols());
    m.dropout = dropout;
    return m;
}

std::vector<ParamView> PolicyModel::param_views() {
    auto views = encoder->param_views();
    auto add = [&](const char* name, auto& value, auto& grad) {
        views.push_back(ParamView{name, value.data(), grad.data(),
                                  static_cast<std::size_t>(value.size())});
    };
    add("policy.A", policy.A, policy_grad.A);
    add("policy.bias", policy.bias, policy_grad.bias);
    add("policy.W1", policy.W1, policy_grad.W1);
    return views;
}

void PolicyModel::zero_grad() {
    for (auto& view : param_views()) std::fill(view.grad, view.grad + view.size, 0.0);
}

void save_checkpoint(const std::string& path, PolicyModel& model, double baseline,
                     const std::string& rng_state, std::uint64_t seed,
                     const std::string& fingerprint) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    auto views = model.param_views();
    nlohmann::ordered_json header;
    header["kind"] = "checkpoint";
    header["encoder"] = std::string(to_string(model.encoder_kind));
    header["d0"] = model.d0();
    header["d1"] = model.d1();
    header["d2"] = model.d2();
    header["dropout"] = model.dropout;
    header["baseline"] = baseline;
    header["seed"] = seed;
    header["fingerprint"] = fingerprint;
    header["rng"] = rng_state;
    nlohmann::ordered_json params = nlohmann::ordered_json::array();
    for (const auto& v : views) {
        params.push_back({{"name", v.name}, {"size", v.size}});
    }
    header["params"] = params;
    out << header.dump() << '\n';
    for (const auto& v : views) write_f32(out, v.value, v.size);
    if (!out) throw DataError("write failed for '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(read_header_line(in, path));
    } catch (const nlohmann::json::exception& e) {
        throw DataError("bad checkpoint header in '" + path + "': " + e.what());
    }
    if (header.value("kind", "") != "checkpoint") {
        throw DataError("'" + path + "' is not a checkpoint file");
    }
    const auto kind = encoder_kind_from_string(header.at("encoder").get<std::string>());
    if (!kind) throw DataError("unknown encoder kind in checkpoint");

    Checkpoint ckpt;
    ckpt.model = PolicyModel::create(*kind, header.at("d0").get<std::size_t>(),
                                     header.at("d1").get<std::size_t>(),
                                     header.at("d2").get<std::size_t>(),
                                     header.at("dropout").get<double>(), /*seed=*/0);
    ckpt.baseline = header.at("baseline").get<double>();
    ckpt.seed = header.at("seed").get<std::uint64_t>();
    ckpt.fingerprint = header.value("fingerprint", "");
    ckpt.rng_state = header.value("rng", "");

    auto views = ckpt.model.param_views();
    const auto& params = header.at("params");
    if (params.size() != views.size()) {
        throw DataError("checkpoint parameter list does not match the model");
    }
    for (std::size_t i = 0; i < views.size(); ++i) {
        const auto name = params[i].at("name").get<std::string>();
        const auto size = params[i].at("size").get<std::size_t>();
        if (name != views[i].name || size != views[i].size) {
            throw DataError("checkpoint parameter '" + name + "' does not match model '" +
                            views[i].name + "'");
        }
        read_f32(in, views[i].value, size);
    }
    return ckpt;
}

std::vector<Episode> rollout_batch(const KnowledgeGraph& g, const EmbeddingTable& table,
                                   const PolicyParams& policy,
                                   const Eigen::VectorXd& session_vec, EntityId start,
                                   const TrainConfig& config, std::mt19937_64& rng) {
    struct Frontier {
        State state;
        std::vector<StepTrace> steps;
        double log_prob_sum = 0.0;
    };

    std::vector<Episode> done;
    std::vector<Frontier> frontier;
    frontier.push_back(Frontier{
        initial_state(session_vec, start, g, config.start == StartMode::last_item),
        {},
        0.0});

    for (std::size_t t = 0; t < config.path_length; ++t) {
        std::vector<Frontier> next;
        for (auto& f : frontier) {
            const auto actions = g.neighbors(f.state.entity, f.state.visited);
            if (actions.empty()) {
                if (t == 0) return {};  // the whole session is a dead end
                Episode ep;
                ep.path = f.state.path;
                ep.steps = std::move(f.steps);
                ep.dead_end = true;
                ep.log_prob_sum = f.log_prob_sum;
                done.push_back(std::move(ep));
                continue;
            }
            StateVectorCache sv;
            const Eigen::VectorXd s_t = state_vector(f.state, policy, table, &sv);
            const ActionDistribution dist = action_distribution(s_t, actions, policy, table);
            const auto picked =
                sample_without_replacement(dist.probs, config.widths[t], rng);
            for (const std::size_t idx : picked) {
                StepTrace trace;
                trace.actions = actions;
                trace.chosen = idx;
                trace.sv = sv;
                trace.probs = dist.probs;
                trace.log_prob = dist.log_probs[static_cast<Eigen::Index>(idx)];
                Frontier child;
                child.state = step(f.state, actions[idx], g);
                child.steps = f.steps;
                child.steps.push_back(std::move(trace));
                child.log_prob_sum = f.log_prob_sum + dist.log_probs[static_cast<Eigen::Index>(idx)];
                next.push_back(std::move(child));
            }
        }
        frontier = std::move(next);
    }
    for (auto& f : frontier) {
        Episode ep;
        ep.path = std::move(f.state.path);
        ep.steps = std::move(f.steps);
        ep.log_prob_sum = f.log_prob_sum;
        done.push_back(std::move(ep));
    }
    return done;
}

std::optional<std::size_t> ItemScores::position_of(std::uint32_t item) const {
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i] == item) return i;
    }
    return std::nullopt;
}

ItemScores score_items(std::vector<Episode>& episodes) {
    std::unordered_map<std::uint32_t, double> raw;
    for (const auto& ep : episodes) {
        if (ep.dead_end || !is_product(ep.path.terminal())) continue;
        raw[ep.path.terminal().index] += std::exp(ep.log_prob_sum);
    }
    std::vector<std::pair<std::uint32_t, double>> order(raw.begin(), raw.end());
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    ItemScores scores;
    scores.items.reserve(order.size());
    scores.raw.resize(static_cast<Eigen::Index>(order.size()));
    scores.normalized.resize(static_cast<Eigen::Index>(order.size()));
    const double top = order.empty() ? 1.0 : order.front().second;
    std::unordered_map<std::uint32_t, std::size_t> position;
    for (std::size_t i = 0; i < order.size(); ++i) {
        scores.items.push_back(order[i].first);
        scores.raw[static_cast<Eigen::Index>(i)] = order[i].second;
        scores.normalized[static_cast<Eigen::Index>(i)] = order[i].second / top;
        position.emplace(order[i].first, i);
    }
    for (auto& ep : episodes) {
        if (ep.dead_end || !is_product(ep.path.terminal())) continue;
        ep.rank = position.at(ep.path.terminal().index);
    }
    return scores;
}

void assign_rewards(std::vector<Episode>& episodes, const Eigen::VectorXd& session_vec,
                    EntityId target, const EmbeddingTable& table,
                    const RewardConfig& config, double gamma) {
    for (auto& ep : episodes) {
        if (ep.dead_end) {
            ep.reward = RewardBreakdown{};
            ep.ret = 0.0;
            continue;
        }
        ep.reward = reward(ep.path.terminal(), ep.path, session_vec, target, ep.rank,
                           table, config);
        const double hops = static_cast<double>(ep.path.hops());
        ep.ret = std::pow(gamma, hops - 1.0) * ep.reward.total;
    }
}

ReinforceLoss reinforce_loss(const std::vector<Episode>& episodes, double baseline) {
    if (episodes.empty()) throw DataError("policy loss needs at least one episode");
    ReinforceLoss out;
    const double n = static_cast<double>(episodes.size());
    out.coeff.reserve(episodes.size());
    for (const auto& ep : episodes) {
        const double advantage = ep.ret - baseline;
        out.value -= advantage * ep.log_prob_sum / n;
        out.coeff.push_back(-advantage / n);
    }
    return out;
}

namespace {
constexpr double kCrossEntropyEps = 1e-7;
}

double binary_cross_entropy(double yhat, double y) {
    const double clamped = std::clamp(yhat, kCrossEntropyEps, 1.0 - kCrossEntropyEps);
    return -(y * std::log(clamped) + (1.0 - y) * std::log(1.0 - clamped));
}

CrossEntropyLoss cross_entropy_loss(const ItemScores& scores, std::uint32_t target_item) {
    constexpr double kEps = kCrossEntropyEps;
    const auto n = scores.items.size();
    if (n == 0) throw DataError("cross-entropy needs a nonempty candidate set");
    if (!scores.position_of(target_item)) {
        throw DataError("cross-entropy target is not among the candidates");
    }
    const double top = scores.raw[0];

    CrossEntropyLoss out;
    out.d_raw = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        const double yhat = scores.raw[jj] / top;
        const double clamped = std::clamp(yhat, kEps, 1.0 - kEps);
        const double y = scores.items[j] == target_item ? 1.0 : 0.0;
        out.value += binary_cross_entropy(yhat, y);
        if (yhat > kEps && yhat < 1.0 - kEps) {
            g[jj] = -y / clamped + (1.0 - y) / (1.0 - clamped);
        }
    }
    // yhat_j = raw_j / max(raw); the max is raw[0] (sorted descending), so
    // raw[0] also feeds every other candidate through the normalization.
    for (std::size_t k = 0; k < n; ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        out.d_raw[kk] = g[kk] / top;
    }
    out.d_raw[0] -= g.dot(scores.raw) / (top * top);
    return out;
}

namespace {

class SgdOptimizer final : public Optimizer {
public:
    explicit SgdOptimizer(double lr) : lr_(lr) {}
    void step(const std::vector<ParamView>& views) override {
        for (const auto& v : views) {
            for (std::size_t i = 0; i < v.size; ++i) v.value[i] -= lr_ * v.grad[i];
        }
    }

private:
    double lr_;
};

class AdamOptimizer final : public Optimizer {
public:
    explicit AdamOptimizer(double lr) : lr_(lr) {}
    void step(const std::vector<ParamView>& views) override {
        if (m_.empty()) {
            for (const auto& v : views) {
                m_.emplace_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(v.size)));
                v_.emplace_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(v.size)));
            }
        }
        if (m_.size() != views.size()) {
            throw DataError("optimizer state does not match the parameter list");
        }
        ++t_;
        const double corr1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
        const double corr2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
        for (std::size_t i = 0; i < views.size(); ++i) {
            const auto& view = views[i];
            if (static_cast<std::size_t>(m_[i].size()) != view.size) {
                throw DataError("optimizer state does not match the parameter list");
            }
            for (std::size_t j = 0; j < view.size; ++j) {
                const double grad = view.grad[j];
                auto& m = m_[i][static_cast<Eigen::Index>(j)];
                auto& v = v_[i][static_cast<Eigen::Index>(j)];
                m = kBeta1 * m + (1.0 - kBeta1) * grad;
                v = kBeta2 * v + (1.0 - kBeta2) * grad * grad;
                const double mhat = m / corr1;
                const double vhat = v / corr2;
                view.value[j] -= lr_ * mhat / (std::sqrt(vhat) + kEps);
            }
        }
    }

private:
    static constexpr double kBeta1 = 0.9;
    static constexpr double kBeta2 = 0.999;
    static constexpr double kEps = 1e-8;
    double lr_;
    std::uint64_t t_ = 0;
    std::vector<Eigen::VectorXd> m_, v_;
};

}  // namespace

std::unique_ptr<Optimizer> make_optimizer(const std::string& name, double lr) {
    if (name == "sgd") return std::make_unique<SgdOptimizer>(lr);
    if (name == "adam") return std::make_unique<AdamOptimizer>(lr);
    throw ConfigError("optimizer must be 'sgd' or 'adam'");
}

Trainer::Trainer(const KnowledgeGraph& g, const EmbeddingTable& table, PolicyModel& model,
                 TrainConfig config)
    : g_(g), table_(table), model_(model), config_(std::move(config)), rng_(config_.seed) {
    config_.validate();
    if (table_.num_entities() != g_.num_entities()) {
        throw DataError("embedding table does not match the graph's entity count");
    }
    if (model_.d0() != table_.dim()) {
        throw ConfigError("policy input dimension must equal the embedding dimension");
    }
    if (model_.encoder->output_dim() != model_.d1()) {
        throw ConfigError("encoder output dimension must match the fused-state layer");
    }
    if (config_.reward.path_level && model_.d1() != model_.d0()) {
        throw ConfigError(
            "the path-level reward requires the session dimension to equal the embedding "
            "dimension; adjust dims or disable it");
    }
    if (config_.start == StartMode::user &&
        g_.kind_counts()[static_cast<std::size_t>(EntityKind::user)] == 0) {
        throw ConfigError("user-start training needs a graph built with user entities");
    }
    optimizer_ = make_optimizer(config_.optimizer, config_.lr);
}

BatchResult Trainer::process_batch(const std::vector<const Session*>& batch,
                                   bool accumulate_grads) {
    BatchResult out;
    out.baseline_used = baseline_;
    const double w_r = config_.reinforce_weight();
    const double w_ce = config_.cross_entropy_weight();

    // Roll out every session under the current parameters.
    for (const Session* session : batch) {
        SessionTrace tr;
        bool resolved = true;
        tr.prefix_rows.reserve(session->items.size());
        for (const auto& item : session->items) {
            const auto id = g_.find(EntityKind::product, item);
            if (!id) {
                resolved = false;
                break;
            }
            tr.prefix_rows.push_back(id->index);
        }
        const auto target = g_.find(EntityKind::product, session->target);
        if (!target) resolved = false;
        std::optional<EntityId> start;
        if (resolved) {
            start = config_.start == StartMode::user
                        ? g_.find(EntityKind::user, session->user_id)
                        : std::optional<EntityId>(
                              g_.entity_at(tr.prefix_rows.back()));
            if (!start) resolved = false;
        }
        if (!resolved) {
            tr.skipped = true;
            ++out.skipped;
            out.sessions.push_back(std::move(tr));
            continue;
        }
        tr.start = *start;
        tr.target_row = target->index;
        tr.session_vec = model_.encoder->forward(tr.prefix_rows, table_, /*training=*/true,
                                                 rng_, tr.enc_cache);
        tr.episodes = rollout_batch(g_, table_, model_.policy, tr.session_vec, tr.start,
                                    config_, rng_);
        if (tr.episodes.empty()) {
            tr.skipped = true;
            ++out.skipped;
            out.sessions.push_back(std::move(tr));
            continue;
        }
        tr.scores = score_items(tr.episodes);
        assign_rewards(tr.episodes, tr.session_vec, *target, table_, config_.reward,
                       config_.gamma);
        tr.ce_eligible = tr.scores.position_of(tr.target_row).has_value();
        out.sessions.push_back(std::move(tr));
    }

    for (const auto& tr : out.sessions) out.episodes += tr.episodes.size();
    if (out.episodes == 0) return out;
    const double n = static_cast<double>(out.episodes);

    double return_sum = 0.0;
    double reward_sum = 0.0;
    double reinforce_sum = 0.0;
    for (const auto& tr : out.sessions) {
        for (const auto& ep : tr.episodes) {
            return_sum += ep.ret;
            reward_sum += ep.reward.total;
            reinforce_sum -= (ep.ret - baseline_) * ep.log_prob_sum;
        }
    }
    out.mean_return = return_sum / n;
    out.mean_reward = reward_sum / n;
    out.loss_reinforce = reinforce_sum / n;

    for (auto& tr : out.sessions) {
        if (tr.skipped || !tr.ce_eligible) continue;
        auto ce = cross_entropy_loss(tr.scores, tr.target_row);
        out.loss_cross_entropy += ce.value;
        tr.ce_d_raw = std::move(ce.d_raw);
        ++out.ce_sessions;
    }
    if (out.ce_sessions > 0) {
        out.loss_cross_entropy /= static_cast<double>(out.ce_sessions);
    }
    out.loss_total = w_r * out.loss_reinforce + w_ce * out.loss_cross_entropy;

    if (!accumulate_grads) return out;

    const auto d1 = static_cast<Eigen::Index>(model_.d1());
    for (auto& tr : out.sessions) {
        if (tr.skipped) continue;
        Eigen::VectorXd d_session = Eigen::VectorXd::Zero(d1);
        for (const auto& ep : tr.episodes) {
            double coeff = w_r * (-(ep.ret - baseline_) / n);
            if (w_ce > 0.0 && tr.ce_eligible && !ep.dead_end &&
                is_product(ep.path.terminal())) {
                const auto pos = tr.scores.position_of(ep.path.terminal().index);
                coeff += w_ce / static_cast<double>(out.ce_sessions) *
                         tr.ce_d_raw[static_cast<Eigen::Index>(*pos)] *
                         std::exp(ep.log_prob_sum);
            }
            if (coeff == 0.0) continue;
            for (const auto& st : ep.steps) {
                // d(loss)/d(logit_i) = coeff * (1[i == chosen] - p_i)
                Eigen::VectorXd d_logit = -coeff * st.probs;
                d_logit[static_cast<Eigen::Index>(st.chosen)] += coeff;

                Eigen::VectorXd dq = Eigen::VectorXd::Zero(
                    static_cast<Eigen::Index>(model_.d0()));
                for (std::size_t i = 0; i < st.actions.size(); ++i) {
                    dq += d_logit[static_cast<Eigen::Index>(i)] *
                          (table_.relation(st.actions[i].relation) +
                           table_.entity(st.actions[i].tail))
                              .transpose();
                }
                model_.policy_grad.W1 += dq * st.sv.s.transpose();
                const Eigen::VectorXd ds = model_.policy.W1.transpose() * dq;
                const Eigen::VectorXd da =
                    ds.cwiseProduct((1.0 - st.sv.s.array().square()).matrix());
                model_.policy_grad.A += da * st.sv.u.transpose();
                model_.policy_grad.bias += da;
                d_session += (model_.policy.A.transpose() * da).head(d1);
            }
        }
        model_.encoder->backward(tr.enc_cache, d_session);
    }
    return out;
}

void Trainer::apply_update() { optimizer_->step(model_.param_views()); }

void Trainer::update_baseline(double mean_return) {
    baseline_ = config_.baseline_decay * baseline_ +
                (1.0 - config_.baseline_decay) * mean_return;
}

TrainReport Trainer::run_epoch(const std::vector<Session>& sessions) {
    if (sessions.empty()) throw DataError("cannot train on an empty session set");
    std::vector<const Session*> order;
    order.reserve(sessions.size());
    for (const auto& s : sessions) order.push_back(&s);
    std::shuffle(order.begin(), order.end(), rng_);

    TrainReport report;
    report.epoch = ++epoch_;
    report.sessions = sessions.size();
    double reinforce_weighted = 0.0;
    double ce_weighted = 0.0;
    double reward_weighted = 0.0;
    std::size_t ce_sessions = 0;

    for (std::size_t begin = 0; begin < order.size(); begin += config_.batch_size) {
        const std::size_t end = std::min(begin + config_.batch_size, order.size());
        const std::vector<const Session*> batch(order.begin() + begin,
                                                order.begin() + end);
        model_.zero_grad();
        BatchResult res = process_batch(batch, /*accumulate_grads=*/true);
        report.skipped_sessions += res.skipped;
        if (res.episodes == 0) continue;
        apply_update();
        update_baseline(res.mean_return);

        const auto n = static_cast<double>(res.episodes);
        reinforce_weighted += res.loss_reinforce * n;
        reward_weighted += res.mean_reward * n;
        report.episodes += res.episodes;
        ce_weighted += res.loss_cross_entropy * static_cast<double>(res.ce_sessions);
        ce_sessions += res.ce_sessions;
        report.ce_skipped += (batch.size() - res.skipped) - res.ce_sessions;
    }

    if (report.episodes > 0) {
        report.loss_reinforce = reinforce_weighted / static_cast<double>(report.episodes);
        report.mean_reward = reward_weighted / static_cast<double>(report.episodes);
    }
    if (ce_sessions > 0) {
        report.loss_cross_entropy = ce_weighted / static_cast<double>(ce_sessions);
    }
    report.loss_total = config_.reinforce_weight() * report.loss_reinforce +
                        config_.cross_entropy_weight() * report.loss_cross_entropy;
    return report;
}

}  // namespace reks
