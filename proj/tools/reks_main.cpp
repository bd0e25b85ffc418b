#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "reks/config.hpp"
#include "reks/errors.hpp"
#include "reks/pipeline.hpp"

namespace {

int run(int argc, char** argv) {
    CLI::App app{"Knowledge-graph path-reasoning recommender pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    // Overrides in parse order: config file first, then every flag.
    std::vector<std::pair<std::string, std::string>> overrides;

    app.add_option("--config", config_path, "flat key = value config file");
    auto add_keyed = [&](const std::string& flag, const std::string& key,
                         const std::string& help) {
        app.add_option_function<std::string>(
            flag, [&overrides, key](const std::string& v) { overrides.emplace_back(key, v); },
            help);
    };
    add_keyed("--workdir", "workdir", "artifact directory");
    add_keyed("--interactions", "interactions", "interaction log (user\\titem\\tts)");
    add_keyed("--metadata", "metadata", "item metadata (JSON lines)");
    add_keyed("--seed", "seed", "master RNG seed");
    add_keyed("--d0", "d0", "embedding dimension");
    add_keyed("--d1", "d1", "session vector dimension");
    add_keyed("--d2", "d2", "fused state dimension");
    add_keyed("--encoder", "encoder", "session encoder: mean | gru");
    add_keyed("--dropout", "dropout", "encoder input dropout rate");
    add_keyed("--min-item-count", "min_item_count", "frequency floor for items");
    add_keyed("--split", "split", "train,validation,test ratios");
    add_keyed("--user-info", "user_info", "include user entities: true | false");
    add_keyed("--transe-margin", "transe_margin", "pretraining hinge margin");
    add_keyed("--transe-lr", "transe_lr", "pretraining learning rate");
    add_keyed("--transe-epochs", "transe_epochs", "pretraining epochs");
    add_keyed("--transe-negatives", "transe_negatives", "corruptions per triple");
    add_keyed("--path-length", "path_length", "reasoning hops per path");
    add_keyed("--p1", "p1", "first-hop beam width");
    add_keyed("--p2", "p2", "later-hop beam width");
    add_keyed("--gamma", "gamma", "return discount factor");
    add_keyed("--beta", "beta", "policy-loss weight in the combined loss");
    add_keyed("--lr", "lr", "policy learning rate");
    add_keyed("--batch-size", "batch_size", "sessions per optimizer step");
    add_keyed("--epochs", "epochs", "policy training epochs");
    add_keyed("--baseline-decay", "baseline_decay", "reward baseline EMA decay");
    add_keyed("--optimizer", "optimizer", "sgd | adam");
    add_keyed("--loss", "loss", "both | reinforce | cross_entropy");
    add_keyed("--reward", "reward", "full | item | item_rank | item_path");
    add_keyed("--start", "start", "path start entity: last_item | user");
    add_keyed("--top-k", "top_k", "recommendation list length");
    add_keyed("--paths-per-item", "paths_per_item", "explanation paths listed per recommended item");
    add_keyed("--topk", "topk", "evaluation cutoffs, e.g. 5,10,20");
    add_keyed("--synth-products", "synth_products", "synthetic catalog size");
    add_keyed("--synth-users", "synth_users", "synthetic user count");
    add_keyed("--synth-sessions", "synth_sessions", "synthetic session count");
    app.add_flag_function(
        "--filter-seen",
        [&overrides](std::int64_t) { overrides.emplace_back("filter_seen", "true"); },
        "drop prefix items from recommendations");
    app.add_option_function<std::vector<std::string>>(
        "--set",
        [&overrides](const std::vector<std::string>& pairs) {
            for (const std::string& kv : pairs) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) {
                    throw CLI::ValidationError("--set expects key=value, got '" + kv + "'");
                }
                overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
            }
        },
        "generic key=value override (repeatable)");

    const char* stage_names[] = {"synth",     "ingest", "build-kg",  "train-transe",
                                 "train",     "recommend", "evaluate", "ablate"};
    const char* stage_help[] = {
        "generate the synthetic successor-rule dataset",
        "sessionize the interaction log and split it",
        "assemble the knowledge graph from train sessions and metadata",
        "pretrain translational embeddings over the graph",
        "train the path-reasoning policy",
        "write top-K recommendations with explanation paths",
        "score the test split (HR@K / NDCG@K)",
        "train and score every ablation variant"};
    for (std::size_t i = 0; i < std::size(stage_names); ++i) {
        CLI::App* sub = app.add_subcommand(stage_names[i], stage_help[i]);
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help() << std::flush;
        return 1;
    }

    reks::RunConfig config;
    if (!config_path.empty()) config = reks::load_config(config_path);
    for (const auto& [key, value] : overrides) config.set(key, value);
    reks::apply_env_seed(config);
    config.validate();

    const std::string stage = app.get_subcommands().at(0)->get_name();
    if (stage == "synth") {
        reks::run_synth(config);
        std::cout << "synthetic dataset written to " << config.workdir << "\n";
    } else if (stage == "ingest") {
        const reks::SessionizeSummary s = run_ingest(config);
        std::cout << "sessions kept: " << s.sessions_kept
                  << " (vocabulary " << s.vocabulary_size << ", day groups "
                  << s.day_groups << ", dropped short " << s.dropped_short << ")\n";
    } else if (stage == "build-kg") {
        const reks::KnowledgeGraph g = run_build_kg(config);
        std::cout << "graph frozen: " << g.num_entities() << " entities, "
                  << g.num_triples() << " triples\n";
    } else if (stage == "train-transe") {
        const auto stats = run_train_transe(config);
        for (std::size_t i = 0; i < stats.size(); ++i) {
            std::printf("epoch %zu  mean_hinge=%.6f  violations=%zu\n", i + 1,
                        stats[i].mean_loss, stats[i].violations);
        }
    } else if (stage == "train") {
        const auto log = run_train(config);
        for (const reks::TrainReport& r : log) {
            std::printf(
                "epoch %zu  L=%.6f  L_r=%.6f  L_ce=%.6f  mean_reward=%.4f  skipped=%zu\n",
                r.epoch, r.loss_total, r.loss_reinforce, r.loss_cross_entropy,
                r.mean_reward, r.skipped_sessions);
        }
    } else if (stage == "recommend") {
        reks::run_recommend(config);
        std::cout << "recommendations written to "
                  << reks::StagePaths{config.workdir}.recommendations() << "\n";
    } else if (stage == "evaluate") {
        const reks::MetricsReport report = run_evaluate(config);
        std::cout << report.to_table();
    } else if (stage == "ablate") {
        const auto results = run_ablate(config);
        std::printf("%-8s %-12s %10s %10s\n", "axis", "variant", "HR@K", "NDCG@K");
        for (const reks::AblationResult& r : results) {
            std::printf("%-8s %-12s %10.2f %10.2f\n", r.axis.c_str(), r.variant.c_str(),
                        r.metrics.hr.front(), r.metrics.ndcg.front());
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const reks::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const reks::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
