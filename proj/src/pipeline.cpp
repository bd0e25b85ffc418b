#include "reks/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "reks/errors.hpp"
#include "reks/transe.hpp"

namespace reks {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    return out;
}

nlohmann::ordered_json header_json(const RunConfig& config) {
    nlohmann::ordered_json j;
    j["fingerprint"] = config.fingerprint();
    j["seed"] = config.seed;
    return j;
}

StartMode start_mode_of(const RunConfig& config) {
    const auto mode = start_mode_from_string(config.start);
    if (!mode) throw ConfigError("unknown start mode '" + config.start + "'");
    return *mode;
}

InferConfig infer_config_of(const RunConfig& config) {
    InferConfig ic;
    ic.widths = config.beam_widths();
    ic.top_k = config.top_k;
    ic.start = start_mode_of(config);
    ic.filter_seen = config.filter_seen;
    return ic;
}

KnowledgeGraph load_graph(const StagePaths& paths) {
    return KnowledgeGraph::load(paths.kg_entities(), paths.kg_triples());
}

}  // namespace

void run_synth(const RunConfig& config) {
    std::filesystem::create_directories(config.workdir);
    const SynthConfig sc = config.synth_config();
    const SynthDataset data = make_synth_dataset(sc);
    write_synth_dataset(data, sc, config.workdir, config.fingerprint());
}

SessionizeSummary run_ingest(const RunConfig& config) {
    std::filesystem::create_directories(config.workdir);
    const StagePaths paths{config.workdir};

    const std::vector<Interaction> interactions =
        parse_interactions(config.interactions_path());
    SessionizeOptions opts;
    opts.min_item_count = config.min_item_count;
    SessionizeSummary summary;
    const std::vector<Session> sessions = sessionize(interactions, opts, &summary);
    const DatasetSplit split = split_sessions(sessions, config.split, config.seed);

    auto header_for = [&](const char* name, std::size_t n) {
        nlohmann::ordered_json j = header_json(config);
        j["split"] = name;
        j["sessions"] = n;
        return j.dump();
    };
    write_sessions(paths.sessions_train(), split.train,
                   header_for("train", split.train.size()));
    write_sessions(paths.sessions_validation(), split.validation,
                   header_for("validation", split.validation.size()));
    write_sessions(paths.sessions_test(), split.test,
                   header_for("test", split.test.size()));

    nlohmann::ordered_json j = header_json(config);
    j["raw_interactions"] = summary.raw_interactions;
    j["interactions_kept"] = summary.interactions_kept;
    j["vocabulary_size"] = summary.vocabulary_size;
    j["day_groups"] = summary.day_groups;
    j["sessions_kept"] = summary.sessions_kept;
    j["dropped_short"] = summary.dropped_short;
    j["train"] = split.train.size();
    j["validation"] = split.validation.size();
    j["test"] = split.test.size();
    open_out(paths.ingest_summary()) << j.dump(2) << '\n';
    return summary;
}

KnowledgeGraph run_build_kg(const RunConfig& config) {
    std::filesystem::create_directories(config.workdir);
    const StagePaths paths{config.workdir};

    const std::vector<Interaction> interactions =
        parse_interactions(config.interactions_path());
    const std::unordered_set<std::string> vocabulary =
        item_vocabulary(interactions, config.min_item_count);
    const std::vector<Session> train = read_sessions(paths.sessions_train());
    const std::vector<ItemMetadata> metadata = parse_metadata(config.metadata_path());

    BuildGraphOptions opts;
    opts.user_info = config.user_info;
    KnowledgeGraph g = build_graph(train, metadata, vocabulary, opts);
    g.save(paths.kg_entities(), paths.kg_triples());

    nlohmann::ordered_json j = header_json(config);
    const nlohmann::ordered_json stats = nlohmann::ordered_json::parse(g.stats_json());
    for (const auto& [key, value] : stats.items()) j[key] = value;
    open_out(paths.kg_stats()) << j.dump(2) << '\n';
    return g;
}

std::vector<TranseEpochStats> run_train_transe(const RunConfig& config) {
    const StagePaths paths{config.workdir};
    const KnowledgeGraph g = load_graph(paths);
    EmbeddingTable table = init_embeddings(g.num_entities(), config.d0, config.seed);
    const std::vector<TranseEpochStats> stats = train_transe(table, g, config.transe_config());
    table.save(paths.embeddings(), config.seed, config.fingerprint());
    return stats;
}

PolicyModel train_policy(const KnowledgeGraph& g, const EmbeddingTable& table,
                         const std::vector<Session>& sessions, const TrainConfig& config,
                         EncoderKind encoder, std::size_t d1, std::size_t d2,
                         double dropout, double* baseline_out, std::string* rng_state_out,
                         std::vector<TrainReport>* log) {
    PolicyModel model =
        PolicyModel::create(encoder, table.dim(), d1, d2, dropout, config.seed);
    Trainer trainer(g, table, model, config);
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        const TrainReport report = trainer.run_epoch(sessions);
        if (log) log->push_back(report);
    }
    if (baseline_out) *baseline_out = trainer.baseline();
    if (rng_state_out) {
        std::ostringstream state;
        state << trainer.rng();
        *rng_state_out = state.str();
    }
    return model;
}

std::vector<TrainReport> run_train(const RunConfig& config) {
    const StagePaths paths{config.workdir};
    const KnowledgeGraph g = load_graph(paths);
    const EmbeddingTable table =
        EmbeddingTable::load(paths.embeddings(), g.num_entities());
    const std::vector<Session> sessions = read_sessions(paths.sessions_train());

    std::vector<TrainReport> log;
    double baseline = 0.0;
    std::string rng_state;
    PolicyModel model =
        train_policy(g, table, sessions, config.train_config(), config.encoder,
                     config.d1, config.d2, config.dropout, &baseline, &rng_state, &log);

    save_checkpoint(paths.checkpoint(), model, baseline, rng_state, config.seed,
                    config.fingerprint());

    std::ofstream out = open_out(paths.train_log());
    out << header_json(config).dump() << '\n';
    for (const TrainReport& r : log) {
        nlohmann::ordered_json j;
        j["epoch"] = r.epoch;
        j["L_r"] = r.loss_reinforce;
        j["L_ce"] = r.loss_cross_entropy;
        j["L"] = r.loss_total;
        j["mean_reward"] = r.mean_reward;
        j["skipped_sessions"] = r.skipped_sessions;
        out << j.dump() << '\n';
    }
    return log;
}

void run_recommend(const RunConfig& config) {
    const StagePaths paths{config.workdir};
    const KnowledgeGraph g = load_graph(paths);
    const EmbeddingTable table =
        EmbeddingTable::load(paths.embeddings(), g.num_entities());
    Checkpoint checkpoint = load_checkpoint(paths.checkpoint());
    const std::vector<Session> sessions = read_sessions(paths.sessions_test());
    const InferConfig ic = infer_config_of(config);
    const LabelMap labels = graph_labels(g);

    std::ofstream out = open_out(paths.recommendations());
    out << header_json(config).dump() << '\n';
    for (std::size_t i = 0; i < sessions.size(); ++i) {
        const SessionRecommendation rec =
            recommend_for_session(g, table, checkpoint.model, sessions[i], ic);
        nlohmann::ordered_json j;
        j["session_id"] = i;
        nlohmann::ordered_json list = nlohmann::ordered_json::array();
        for (const Recommendation& r : rec.ranked.items) {
            nlohmann::ordered_json entry;
            entry["item"] = g.raw_id_of(r.item);
            entry["score"] = r.score;
            entry["path"] = render_explanation(r.explanation.path, &labels);
            if (config.paths_per_item > 1) {
                nlohmann::ordered_json extra = nlohmann::ordered_json::array();
                const std::size_t n = std::min(config.paths_per_item, r.paths.size());
                for (std::size_t pi = 0; pi < n; ++pi) {
                    extra.push_back(render_explanation(r.paths[pi].path, &labels));
                }
                entry["paths"] = std::move(extra);
            }
            list.push_back(std::move(entry));
        }
        j["recommendations"] = std::move(list);
        j["skipped"] = rec.skipped;
        out << j.dump() << '\n';
    }
}

MetricsReport run_evaluate(const RunConfig& config) {
    const StagePaths paths{config.workdir};
    const KnowledgeGraph g = load_graph(paths);
    const EmbeddingTable table =
        EmbeddingTable::load(paths.embeddings(), g.num_entities());
    Checkpoint checkpoint = load_checkpoint(paths.checkpoint());
    const std::vector<Session> sessions = read_sessions(paths.sessions_test());

    MetricsReport report = evaluate(g, table, checkpoint.model, sessions, config.topk,
                                    infer_config_of(config));
    report.fingerprint = config.fingerprint();
    report.seed = config.seed;
    open_out(paths.metrics()) << report.to_json() << '\n';
    return report;
}

std::vector<AblationResult> run_ablate(const RunConfig& config) {
    const StagePaths paths{config.workdir};
    const KnowledgeGraph g = load_graph(paths);
    const EmbeddingTable table =
        EmbeddingTable::load(paths.embeddings(), g.num_entities());
    const std::vector<Session> train = read_sessions(paths.sessions_train());
    const std::vector<Session> test = read_sessions(paths.sessions_test());

    const TrainConfig base = config.train_config();
    struct Variant {
        std::string axis;
        std::string name;
        TrainConfig tc;
    };
    std::vector<Variant> variants;

    auto reward_variant = [&](const char* name, bool rank, bool path) {
        TrainConfig tc = base;
        tc.reward.item_level = true;
        tc.reward.rank_level = rank;
        tc.reward.path_level = path;
        variants.push_back({"reward", name, tc});
    };
    reward_variant("item_only", false, false);
    reward_variant("no_path", true, false);
    reward_variant("no_rank", false, true);
    reward_variant("full", true, true);

    auto loss_variant = [&](const char* name, bool reinforce, bool ce) {
        TrainConfig tc = base;
        tc.loss_reinforce = reinforce;
        tc.loss_cross_entropy = ce;
        variants.push_back({"loss", name, tc});
    };
    loss_variant("reward_only", true, false);
    loss_variant("ce_only", false, true);
    loss_variant("full", true, true);

    {
        TrainConfig tc = base;
        tc.start = StartMode::last_item;
        variants.push_back({"start", "last_item", tc});
        tc.start = StartMode::user;
        tc.path_length = 3;
        tc.widths = {config.p1, 10, 1};
        variants.push_back({"start", "user", tc});
    }

    for (std::size_t length = 2; length <= 4; ++length) {
        TrainConfig tc = base;
        tc.path_length = length;
        tc.widths.assign(length, 1);
        tc.widths[0] = config.p1;
        variants.push_back({"length", "T" + std::to_string(length), tc});
    }

    std::vector<AblationResult> results;
    results.reserve(variants.size());
    for (const Variant& v : variants) {
        PolicyModel model = train_policy(g, table, train, v.tc, config.encoder,
                                         config.d1, config.d2, config.dropout);
        InferConfig ic;
        ic.widths = v.tc.widths;
        ic.top_k = config.top_k;
        ic.start = v.tc.start;
        ic.filter_seen = config.filter_seen;
        MetricsReport metrics = evaluate(g, table, model, test, config.topk, ic);
        metrics.fingerprint = config.fingerprint();
        metrics.seed = config.seed;
        results.push_back({v.axis, v.name, std::move(metrics)});
    }

    nlohmann::ordered_json j = header_json(config);
    j["k"] = config.topk;
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const AblationResult& r : results) {
        nlohmann::ordered_json entry;
        entry["axis"] = r.axis;
        entry["variant"] = r.variant;
        entry["hr_percent"] = r.metrics.hr;
        entry["ndcg_percent"] = r.metrics.ndcg;
        entry["sessions"] = r.metrics.sessions;
        entry["skipped"] = r.metrics.skipped;
        list.push_back(std::move(entry));
    }
    j["results"] = std::move(list);
    open_out(paths.ablation()) << j.dump(2) << '\n';
    return results;
}

}  // namespace reks
