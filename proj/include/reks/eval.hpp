#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reks/infer.hpp"
#include "reks/ingest.hpp"
#include "reks/kg.hpp"
#include "reks/train.hpp"

namespace reks {

/// 1 iff the target sits within the first k entries.
double hr_at_k(const std::vector<std::uint32_t>& ranked, std::uint32_t target,
               std::size_t k);

/// 1/log2(pos+1) for the target's 1-based position pos <= k, else 0.
double ndcg_at_k(const std::vector<std::uint32_t>& ranked, std::uint32_t target,
                 std::size_t k);

struct MetricsReport {
    std::vector<std::size_t> ks;
    std::vector<double> hr;    // percent, aligned with ks
    std::vector<double> ndcg;  // percent, aligned with ks
    std::size_t sessions = 0;
    std::size_t skipped = 0;
    std::string fingerprint;
    std::uint64_t seed = 0;

    std::string to_json() const;
    /// Aligned columns, two decimals, as in comparative result tables.
    std::string to_table() const;
};

/// One evaluated session: its ranked item list (entity indices) and target.
/// Skipped sessions keep an empty list and score zero for every metric.
struct SessionResult {
    bool skipped = false;
    std::vector<std::uint32_t> ranked;
    std::uint32_t target = 0;
};

/// Means over all sessions (skipped included), reported in percent.
MetricsReport aggregate_metrics(const std::vector<SessionResult>& results,
                                const std::vector<std::size_t>& ks);

/// Runs inference over every session and aggregates. Sessions whose prefix
/// or start entity is missing from the graph are counted and score zero.
MetricsReport evaluate(const KnowledgeGraph& g, const EmbeddingTable& table,
                       PolicyModel& model, const std::vector<Session>& sessions,
                       const std::vector<std::size_t>& ks, const InferConfig& config);

}  // namespace reks
