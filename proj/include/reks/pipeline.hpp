#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reks/config.hpp"
#include "reks/eval.hpp"
#include "reks/infer.hpp"
#include "reks/ingest.hpp"
#include "reks/kg.hpp"
#include "reks/synth.hpp"
#include "reks/train.hpp"

namespace reks {

/// Fixed artifact names inside a run's work directory.
struct StagePaths {
    std::string workdir;

    std::string sessions_train() const { return workdir + "/sessions_train.jsonl"; }
    std::string sessions_validation() const { return workdir + "/sessions_validation.jsonl"; }
    std::string sessions_test() const { return workdir + "/sessions_test.jsonl"; }
    std::string ingest_summary() const { return workdir + "/ingest_summary.json"; }
    std::string kg_entities() const { return workdir + "/kg_entities.tsv"; }
    std::string kg_triples() const { return workdir + "/kg_triples.tsv"; }
    std::string kg_stats() const { return workdir + "/kg_stats.json"; }
    std::string embeddings() const { return workdir + "/embeddings.bin"; }
    std::string checkpoint() const { return workdir + "/checkpoint.bin"; }
    std::string train_log() const { return workdir + "/train_log.jsonl"; }
    std::string recommendations() const { return workdir + "/recommendations.jsonl"; }
    std::string metrics() const { return workdir + "/metrics.json"; }
    std::string ablation() const { return workdir + "/ablation.json"; }
};

/// Writes interactions.tsv / metadata.jsonl / synth_manifest.json.
void run_synth(const RunConfig& config);

/// Raw log -> filtered day sessions -> seeded train/validation/test files.
SessionizeSummary run_ingest(const RunConfig& config);

/// Train sessions + metadata -> frozen graph artifacts.
KnowledgeGraph run_build_kg(const RunConfig& config);

/// Translational pretraining over the stored graph -> embeddings.bin.
std::vector<TranseEpochStats> run_train_transe(const RunConfig& config);

/// In-memory policy training; shared by the train stage and the ablation
/// grid. Appends one TrainReport per epoch to `log` when given.
PolicyModel train_policy(const KnowledgeGraph& g, const EmbeddingTable& table,
                         const std::vector<Session>& sessions, const TrainConfig& config,
                         EncoderKind encoder, std::size_t d1, std::size_t d2,
                         double dropout, double* baseline_out = nullptr,
                         std::string* rng_state_out = nullptr,
                         std::vector<TrainReport>* log = nullptr);

/// Full train stage: loads artifacts, trains, writes checkpoint + log.
std::vector<TrainReport> run_train(const RunConfig& config);

/// Writes recommendations.jsonl over the test sessions.
void run_recommend(const RunConfig& config);

/// Writes metrics.json over the test sessions and returns the report.
MetricsReport run_evaluate(const RunConfig& config);

/// One ablation measurement: a named variant and its test metrics.
struct AblationResult {
    std::string axis;
    std::string variant;
    MetricsReport metrics;
};

/// Trains and evaluates every variant on the four ablation axes (reward
/// terms, loss terms, start entity, path length), sharing the pretrained
/// embeddings; writes ablation.json.
std::vector<AblationResult> run_ablate(const RunConfig& config);

}  // namespace reks
