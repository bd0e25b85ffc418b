#include "reks/infer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "reks/errors.hpp"

namespace reks {

std::vector<ScoredPath> beam_search(const KnowledgeGraph& g, const EmbeddingTable& table,
                                    const PolicyParams& policy,
                                    const Eigen::VectorXd& session_vec, EntityId start,
                                    const std::vector<std::size_t>& widths,
                                    bool require_product_start) {
    if (widths.empty()) throw ConfigError("beam search needs at least one step width");
    for (const auto w : widths) {
        if (w == 0) throw ConfigError("beam widths must be positive");
    }

    struct Branch {
        State state;
        std::vector<double> step_probs;
        double overall = 1.0;
    };

    std::vector<Branch> frontier;
    frontier.push_back(
        Branch{initial_state(session_vec, start, g, require_product_start), {}, 1.0});

    for (const std::size_t width : widths) {
        std::vector<Branch> next;
        for (const auto& branch : frontier) {
            const auto actions = g.neighbors(branch.state.entity, branch.state.visited);
            if (actions.empty()) continue;  // cannot reach the horizon; drop
            const Eigen::VectorXd s_t = state_vector(branch.state, policy, table);
            const ActionDistribution dist =
                action_distribution(s_t, actions, policy, table);

            std::vector<std::size_t> order(actions.size());
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) {
                                 return dist.probs[static_cast<Eigen::Index>(a)] >
                                        dist.probs[static_cast<Eigen::Index>(b)];
                             });
            const std::size_t keep = std::min(width, actions.size());
            for (std::size_t i = 0; i < keep; ++i) {
                const std::size_t idx = order[i];
                const double p = dist.probs[static_cast<Eigen::Index>(idx)];
                Branch child;
                child.state = step(branch.state, actions[idx], g);
                child.step_probs = branch.step_probs;
                child.step_probs.push_back(p);
                child.overall = branch.overall * p;
                next.push_back(std::move(child));
            }
        }
        frontier = std::move(next);
    }

    std::vector<ScoredPath> out;
    out.reserve(frontier.size());
    for (auto& branch : frontier) {
        out.push_back(ScoredPath{std::move(branch.state.path),
                                 std::move(branch.step_probs), branch.overall});
    }
    return out;
}

RankedRecommendation recommend(const std::vector<ScoredPath>& paths, std::size_t k,
                               const std::unordered_set<std::uint32_t>* exclude) {
    struct Aggregate {
        double score = 0.0;
        std::vector<const ScoredPath*> paths;  // beam discovery order
    };
    std::unordered_map<std::uint32_t, Aggregate> by_item;
    std::vector<std::uint32_t> seen_order;
    for (const auto& path : paths) {
        const EntityId terminal = path.path.terminal();
        if (!is_product(terminal)) continue;
        if (exclude != nullptr && exclude->count(terminal.index) > 0) continue;
        auto [it, inserted] = by_item.try_emplace(terminal.index);
        if (inserted) seen_order.push_back(terminal.index);
        it->second.score += path.overall;
        it->second.paths.push_back(&path);
    }

    std::vector<std::uint32_t> order = seen_order;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        const double sa = by_item.at(a).score;
        const double sb = by_item.at(b).score;
        if (sa != sb) return sa > sb;
        return a < b;
    });

    RankedRecommendation ranked;
    const std::size_t keep = std::min(k, order.size());
    ranked.items.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) {
        auto& agg = by_item.at(order[i]);
        std::stable_sort(agg.paths.begin(), agg.paths.end(),
                         [](const ScoredPath* a, const ScoredPath* b) {
                             return a->overall > b->overall;
                         });
        Recommendation rec{agg.paths.front()->path.terminal(), agg.score,
                           *agg.paths.front(), {}};
        rec.paths.reserve(agg.paths.size());
        for (const ScoredPath* p : agg.paths) rec.paths.push_back(*p);
        ranked.items.push_back(std::move(rec));
    }
    return ranked;
}

namespace {

std::string entity_token(EntityId e, const LabelMap* labels) {
    if (labels != nullptr) {
        const auto it = labels->find(e.index);
        if (it != labels->end()) return it->second;
    }
    return std::string(to_string(e.kind)) + ":" + std::to_string(e.index);
}

}  // namespace

std::string render_explanation(const Path& path, const LabelMap* labels) {
    if (path.entities.empty()) throw DataError("cannot render an empty path");
    if (path.entities.size() != path.relations.size() + 1) {
        throw DataError("malformed path: entity/relation counts disagree");
    }
    std::string out = entity_token(path.entities[0], labels);
    for (std::size_t i = 0; i < path.relations.size(); ++i) {
        out += " -[";
        out += to_string(path.relations[i]);
        out += "]-> ";
        out += entity_token(path.entities[i + 1], labels);
    }
    return out;
}

Path parse_explanation(const std::string& text) {
    Path path;
    std::size_t pos = 0;
    auto parse_entity = [&](std::size_t end) {
        const std::string token = text.substr(pos, end - pos);
        const auto colon = token.find(':');
        if (colon == std::string::npos) {
            throw DataError("malformed entity token '" + token + "' in path");
        }
        const auto kind = entity_kind_from_string(token.substr(0, colon));
        if (!kind) throw DataError("unknown entity kind in path token '" + token + "'");
        const std::string digits = token.substr(colon + 1);
        if (digits.empty() ||
            digits.find_first_not_of("0123456789") != std::string::npos) {
            throw DataError("non-numeric entity index in path token '" + token + "'");
        }
        path.entities.push_back(
            EntityId{static_cast<std::uint32_t>(std::stoul(digits)), *kind});
    };

    while (true) {
        const auto arrow = text.find(" -[", pos);
        if (arrow == std::string::npos) {
            parse_entity(text.size());
            break;
        }
        parse_entity(arrow);
        const auto close = text.find("]-> ", arrow);
        if (close == std::string::npos) {
            throw DataError("unterminated relation arrow in path text");
        }
        const std::string rel = text.substr(arrow + 3, close - arrow - 3);
        const auto relation = relation_from_string(rel);
        if (!relation) throw DataError("unknown relation '" + rel + "' in path text");
        path.relations.push_back(*relation);
        pos = close + 4;
    }
    if (path.entities.size() != path.relations.size() + 1) {
        throw DataError("malformed path text: entity/relation counts disagree");
    }
    return path;
}

LabelMap graph_labels(const KnowledgeGraph& g) {
    LabelMap labels;
    labels.reserve(g.num_entities());
    for (std::uint32_t i = 0; i < g.num_entities(); ++i) {
        const EntityId e = g.entity_at(i);
        labels.emplace(i, std::string(to_string(e.kind)) + ":" + g.raw_id_of(e));
    }
    return labels;
}

SessionRecommendation recommend_for_session(const KnowledgeGraph& g,
                                            const EmbeddingTable& table,
                                            PolicyModel& model, const Session& session,
                                            const InferConfig& config) {
    SessionRecommendation out;
    std::vector<std::uint32_t> prefix_rows;
    prefix_rows.reserve(session.items.size());
    for (const auto& item : session.items) {
        const auto id = g.find(EntityKind::product, item);
        if (!id) {
            out.skipped = true;
            return out;
        }
        prefix_rows.push_back(id->index);
    }
    std::optional<EntityId> start;
    if (config.start == StartMode::user) {
        start = g.find(EntityKind::user, session.user_id);
    } else {
        start = g.entity_at(prefix_rows.back());
    }
    if (!start) {
        out.skipped = true;
        return out;
    }

    std::mt19937_64 unused_rng(0);  // dropout is off outside training
    EncoderCache cache;
    const Eigen::VectorXd session_vec =
        model.encoder->forward(prefix_rows, table, /*training=*/false, unused_rng, cache);
    const auto paths = beam_search(g, table, model.policy, session_vec, *start,
                                   config.widths, config.start == StartMode::last_item);

    std::unordered_set<std::uint32_t> seen;
    if (config.filter_seen) {
        seen.insert(prefix_rows.begin(), prefix_rows.end());
    }
    out.ranked = recommend(paths, config.top_k, config.filter_seen ? &seen : nullptr);
    return out;
}

}  // namespace reks
