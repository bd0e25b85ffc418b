#include "reks/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

#include "reks/errors.hpp"

namespace reks {

double hr_at_k(const std::vector<std::uint32_t>& ranked, std::uint32_t target,
               std::size_t k) {
    const std::size_t limit = std::min(k, ranked.size());
    for (std::size_t i = 0; i < limit; ++i) {
        if (ranked[i] == target) return 1.0;
    }
    return 0.0;
}

double ndcg_at_k(const std::vector<std::uint32_t>& ranked, std::uint32_t target,
                 std::size_t k) {
    const std::size_t limit = std::min(k, ranked.size());
    for (std::size_t i = 0; i < limit; ++i) {
        if (ranked[i] == target) {
            const double pos = static_cast<double>(i + 1);
            return 1.0 / std::log2(pos + 1.0);
        }
    }
    return 0.0;
}

MetricsReport aggregate_metrics(const std::vector<SessionResult>& results,
                                const std::vector<std::size_t>& ks) {
    if (ks.empty()) throw ConfigError("aggregate_metrics: no cutoffs given");
    MetricsReport report;
    report.ks = ks;
    report.hr.assign(ks.size(), 0.0);
    report.ndcg.assign(ks.size(), 0.0);
    report.sessions = results.size();
    for (const SessionResult& r : results) {
        if (r.skipped) {
            ++report.skipped;
            continue;  // contributes zero to every sum
        }
        for (std::size_t i = 0; i < ks.size(); ++i) {
            report.hr[i] += hr_at_k(r.ranked, r.target, ks[i]);
            report.ndcg[i] += ndcg_at_k(r.ranked, r.target, ks[i]);
        }
    }
    const double denom = results.empty() ? 1.0 : static_cast<double>(results.size());
    for (std::size_t i = 0; i < ks.size(); ++i) {
        report.hr[i] = 100.0 * report.hr[i] / denom;
        report.ndcg[i] = 100.0 * report.ndcg[i] / denom;
    }
    return report;
}

std::string MetricsReport::to_json() const {
    nlohmann::ordered_json j;
    j["k"] = ks;
    j["hr_percent"] = hr;
    j["ndcg_percent"] = ndcg;
    j["sessions"] = sessions;
    j["skipped"] = skipped;
    j["fingerprint"] = fingerprint;
    j["seed"] = seed;
    return j.dump();
}

std::string MetricsReport::to_table() const {
    std::string out = "    K      HR@K    NDCG@K\n";
    char line[64];
    for (std::size_t i = 0; i < ks.size(); ++i) {
        std::snprintf(line, sizeof(line), "%5zu  %8.2f  %8.2f\n", ks[i], hr[i],
                      ndcg[i]);
        out += line;
    }
    return out;
}

MetricsReport evaluate(const KnowledgeGraph& g, const EmbeddingTable& table,
                       PolicyModel& model, const std::vector<Session>& sessions,
                       const std::vector<std::size_t>& ks, const InferConfig& config) {
    if (ks.empty()) throw ConfigError("evaluate: no cutoffs given");
    if (sessions.empty()) throw DataError("evaluate: empty session set");
    InferConfig run = config;
    run.top_k = *std::max_element(ks.begin(), ks.end());

    constexpr std::uint32_t kNoTarget = std::numeric_limits<std::uint32_t>::max();
    std::vector<SessionResult> results;
    results.reserve(sessions.size());
    for (const Session& session : sessions) {
        SessionResult result;
        const SessionRecommendation rec =
            recommend_for_session(g, table, model, session, run);
        if (rec.skipped) {
            result.skipped = true;
        } else {
            result.ranked.reserve(rec.ranked.items.size());
            for (const Recommendation& r : rec.ranked.items) {
                result.ranked.push_back(r.item.index);
            }
            const std::optional<EntityId> target =
                g.find(EntityKind::product, session.target);
            result.target = target ? target->index : kNoTarget;
        }
        results.push_back(std::move(result));
    }
    return aggregate_metrics(results, ks);
}

}  // namespace reks
