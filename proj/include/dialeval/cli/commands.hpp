#pragma once

// The command layer behind the dialeval binary. Every command resolves its
// config, claims a run directory named by the config + input fingerprint,
// writes its artifacts there, and finishes with a manifest. Failures leave a
// machine-readable error record and a non-zero exit.

#include <filesystem>
#include <memory>
#include <set>
#include <string>

#include "dialeval/amr/simplify.hpp"
#include "dialeval/cli/amr_backend.hpp"
#include "dialeval/cli/config.hpp"
#include "dialeval/cli/dataset.hpp"
#include "dialeval/cli/manifest.hpp"
#include "dialeval/eval/report.hpp"
#include "dialeval/judge/http_client.hpp"
#include "dialeval/judge/judge.hpp"
#include "dialeval/slm/attention_export.hpp"
#include "dialeval/slm/checkpoint.hpp"
#include "dialeval/train/synthetic.hpp"
#include "dialeval/train/trainer.hpp"

namespace dialeval::cli {

struct CommandOutcome {
    int exit_code = 0;
    std::string run_dir;
    std::string error;
};

namespace commands_detail {

inline std::shared_ptr<AmrBackend> make_backend(const Config& config,
                                                const std::string& dataset_path) {
    std::string kind = config.get("amr_backend");
    std::shared_ptr<AmrBackend> inner;
    if (kind == "fixture") {
        inner = std::make_shared<FixtureBackend>(FixtureBackend::load(config.get("amr_fixture")));
    } else if (kind == "command") {
        inner = std::make_shared<CommandBackend>(config.get("amr_command"));
    } else {
        throw ConfigError("amr_backend must be 'fixture' or 'command', got " + kind);
    }
    std::string cache = config.get_or(
        "amr_cache", std::filesystem::path(dataset_path).parent_path().string() + "/amr_cache");
    return std::make_shared<CachingBackend>(inner, cache);
}

inline slm::SlmConfig model_config(const Config& config) {
    slm::SlmConfig mc;
    mc.width = config.get_int("width");
    mc.seq_layers = config.get_int("seq_layers");
    mc.seq_heads = config.get_int("seq_heads");
    mc.ff_multiplier = config.get_int("ff_multiplier");
    mc.graph_layers = config.get_int("graph_layers");
    mc.validate();
    return mc;
}

inline slm::EncoderMode encoder_mode(const Config& config) {
    std::string mode = lowercase(config.get("encoder_mode"));
    if (mode == "both") return slm::EncoderMode::Both;
    if (mode == "graph_only") return slm::EncoderMode::GraphOnly;
    if (mode == "sequence_only") return slm::EncoderMode::SequenceOnly;
    throw ConfigError("encoder_mode must be both, graph_only or sequence_only");
}

inline train::AblationConfig ablation_config(const Config& config) {
    train::AblationConfig a;
    a.use_gate = config.get_bool("use_gate");
    a.use_contrastive = config.get_bool("use_contrastive");
    a.encoder_mode = encoder_mode(config);
    return a;
}

inline std::unique_ptr<judge::LlmClient> make_client(const Config& config) {
    std::string kind = config.get("judge_client");
    if (kind == "mock")
        return std::make_unique<judge::MockPatternClient>(config.get_int("mock_score"));
    if (kind == "replay") {
        auto client = std::make_unique<judge::ReplayClient>();
        for (const auto& line : split_lines(read_file(config.get("replay_transcript")))) {
            if (trim(line).empty()) continue;
            nlohmann::json j = nlohmann::json::parse(line);
            client->add(j.at("pair_id").get<std::string>(),
                        judge::criterion_from_name(j.at("criterion").get<std::string>()),
                        j.at("completion").get<std::string>());
        }
        return client;
    }
    if (kind == "http") {
        judge::HttpClientConfig hc;
        hc.base_url = config.get("http_base_url");
        hc.path = config.get("http_path");
        hc.model = config.get("http_model");
        hc.api_key_env = config.get("http_api_key_env");
        return std::make_unique<judge::HttpLlmClient>(hc);
    }
    throw ConfigError("judge_client must be mock, replay or http, got " + kind);
}

// Stratified split by label, deterministic in the seed.
inline void split_examples(const std::vector<train::TrainingExample>& all, double val_fraction,
                           std::uint64_t seed, std::vector<train::TrainingExample>& train_out,
                           std::vector<train::TrainingExample>& val_out) {
    std::vector<size_t> pos, neg;
    for (size_t i = 0; i < all.size(); ++i) (all[i].label == 1 ? pos : neg).push_back(i);
    std::mt19937_64 rng(seed);
    for (auto* pool : {&pos, &neg}) {
        for (size_t i = pool->size(); i > 1; --i) {
            std::uniform_int_distribution<size_t> d(0, i - 1);
            std::swap((*pool)[i - 1], (*pool)[d(rng)]);
        }
        size_t n_val = static_cast<size_t>(pool->size() * val_fraction);
        for (size_t i = 0; i < pool->size(); ++i)
            (i < n_val ? val_out : train_out).push_back(all[(*pool)[i]]);
    }
}

inline void build_vocabularies(const std::vector<train::TrainingExample>& examples,
                               slm::Vocabulary& vocab, slm::ConceptVocab& concepts,
                               slm::RelationVocab& relations) {
    std::vector<std::string> texts;
    for (const auto& ex : examples) {
        for (const auto& turn : ex.pair.context) texts.push_back(turn);
        texts.push_back(ex.pair.response);
        if (ex.pair.has_graphs) {
            amr::AmrGraph merged = amr::merge_context_response_graphs(ex.pair.context_graph,
                                                                      ex.pair.response_graph);
            concepts.add_graph(merged);
            relations.add_graph(merged);
        }
    }
    vocab = slm::Vocabulary::build(texts);
}

inline void command_preprocess(const Config& config, RunDirectory& run) {
    std::string dataset_path = config.get("dataset");
    IngestResult ingest =
        ingest_dataset(dataset_path, dataset_format_from_name(config.get("dataset_format")));
    auto backend = make_backend(config, dataset_path);

    size_t parsed = 0, cached_or_reused = 0;
    for (auto& record : ingest.records) {
        for (const auto& text : record.all_texts()) {
            if (record.has_graph(text)) {
                ++cached_or_reused;
                continue;
            }
            std::string penman = backend->parse_sentence(text);
            amr::AmrGraph g = amr::parse_penman(penman);
            amr::ValidationReport before = amr::validate_graph(g);
            if (!before.ok)
                throw FormatError("backend produced an invalid graph for \"" + text + "\": " +
                                  before.issues.front().message);
            amr::AmrGraph simplified = amr::simplify_graph(g);
            amr::ValidationReport after = amr::validate_graph(simplified);
            if (!after.ok)
                throw FormatError("simplification broke the graph for \"" + text + "\"");
            record.graphs[text] = amr::serialize_penman(simplified);
            ++parsed;
        }
    }

    run.log("preprocessed " + std::to_string(ingest.records.size()) + " records, parsed " +
            std::to_string(parsed) + " texts via " + backend->name());
    run.write_artifact("preprocessed.jsonl", render_dataset(ingest.records));
    nlohmann::json summary = {{"records", ingest.records.size()},
                              {"texts_parsed", parsed},
                              {"texts_reused", cached_or_reused},
                              {"positive_responses", ingest.positive_count},
                              {"random_negative_responses", ingest.random_count},
                              {"adversarial_negative_responses", ingest.adversarial_count},
                              {"warnings", ingest.warnings},
                              {"backend", backend->name()}};
    run.write_artifact("summary.json", summary.dump(2) + "\n");
}

inline void command_train(const Config& config, RunDirectory& run) {
    IngestResult ingest = ingest_dataset(config.get("preprocessed"),
                                         dataset_format_from_name(config.get("dataset_format")));
    train::AblationConfig ablation = ablation_config(config);
    bool needs_graphs = ablation.encoder_mode != slm::EncoderMode::SequenceOnly;
    auto examples = expand_records(ingest.records, needs_graphs);

    std::vector<train::TrainingExample> train_split, val_split;
    split_examples(examples, config.get_double("val_fraction"), config.get_seed("seed"),
                   train_split, val_split);

    slm::Vocabulary vocab;
    slm::ConceptVocab concepts;
    slm::RelationVocab relations;
    build_vocabularies(train_split, vocab, concepts, relations);
    // a pretrained sequence encoder brings its own token vocabulary
    if (config.has("pretrained_sequence"))
        vocab = slm::load_checkpoint(config.get("pretrained_sequence")).model.vocab;

    slm::SlmModel model = slm::SlmModel::init(model_config(config), vocab, concepts, relations,
                                              config.get_seed("seed"));
    if (config.has("pretrained_sequence"))
        slm::load_pretrained_sequence_encoder(model, config.get("pretrained_sequence"));

    train::TrainConfig tc;
    tc.epochs = config.get_int("epochs");
    tc.batch_size = config.get_int("batch_size");
    tc.learning_rate = config.get_double("learning_rate");
    tc.tau = config.get_double("tau");
    tc.grad_clip = config.get_double("grad_clip");
    tc.seed = config.get_seed("seed");

    run.log("training on " + std::to_string(train_split.size()) + " examples, validating on " +
            std::to_string(val_split.size()));
    train::TrainResult result =
        train::train_slm(std::move(model), train_split, val_split, tc, ablation);
    run.log("best epoch " + std::to_string(result.best_epoch) + ", val accuracy " +
            std::to_string(result.best_val_accuracy));

    nlohmann::json snapshot = {{"config", run.config_hash()},
                               {"best_epoch", result.best_epoch},
                               {"best_val_accuracy", result.best_val_accuracy}};
    slm::save_checkpoint(result.model, run.artifact_path("checkpoint.bin"), snapshot);
    run.record_artifact("checkpoint.bin");
    run.write_artifact("metrics.tsv", train::render_metric_history(result.history));
    run.write_artifact("train_summary.json", snapshot.dump(2) + "\n");
}

inline void command_score(const Config& config, RunDirectory& run) {
    IngestResult ingest = ingest_dataset(config.get("preprocessed"),
                                         dataset_format_from_name(config.get("dataset_format")));
    auto examples = expand_records(ingest.records, /*require_graphs=*/true);
    slm::LoadedCheckpoint loaded = slm::load_checkpoint(config.get("checkpoint"));

    std::ostringstream out;
    for (const auto& ex : examples) {
        slm::SlmScore score = slm::score_pair(loaded.model, ex.pair);
        nlohmann::json line = {{"pair_id", ex.pair.id},
                               {"p_positive", score.p_positive},
                               {"label", ex.label},
                               {"negative_kind", train::negative_kind_name(ex.negative_kind)}};
        out << line.dump() << '\n';
    }
    run.log("scored " + std::to_string(examples.size()) + " pairs");
    run.write_artifact("scores.jsonl", out.str());
}

inline void command_judge(const Config& config, RunDirectory& run) {
    IngestResult ingest = ingest_dataset(config.get("preprocessed"),
                                         dataset_format_from_name(config.get("dataset_format")));
    auto examples = expand_records(ingest.records, /*require_graphs=*/true);
    slm::LoadedCheckpoint loaded = slm::load_checkpoint(config.get("checkpoint"));

    auto [standard, adversarial] =
        eval::build_eval_sets(examples, config.get_int("n_per_set"), config.get_seed("eval_seed"));

    std::unique_ptr<judge::LlmClient> client = make_client(config);
    judge::LlmClientConfig jc;
    jc.max_retries = config.get_int("max_retries");
    jc.backoff_initial_ms = config.get_int("backoff_ms");
    jc.requests_per_second = config.get_double("requests_per_second");
    jc.max_in_flight = config.get_int("max_in_flight");

    judge::AuditLog audit(run.artifact_path("audit.jsonl"));
    auto persist = audit.sink();

    nlohmann::json results_json;
    for (const eval::EvalSet* set : {&standard, &adversarial}) {
        std::vector<judge::JudgeJob> jobs;
        for (const auto& ex : set->pairs)
            jobs.push_back({&ex.pair, slm::score_pair(loaded.model, ex.pair).p_positive});
        nlohmann::json set_results = nlohmann::json::array();
        for (const auto& result : judge::judge_eval_set(jobs, *client, jc, persist))
            set_results.push_back(judge::to_json(result));
        results_json[eval::eval_set_name(set->kind)] = set_results;
    }
    run.log("judged " + std::to_string(standard.pairs.size() + adversarial.pairs.size()) +
            " pairs across both sets");
    run.record_artifact("audit.jsonl");
    run.write_artifact("judge_results.json", results_json.dump(2) + "\n");
}

inline void command_evaluate(const Config& config, RunDirectory& run) {
    nlohmann::json results_json = nlohmann::json::parse(read_file(config.get("judge_results")));
    eval::AnnotationSet annotations =
        eval::AnnotationSet::parse_tsv(read_file(config.get("annotations")));

    std::vector<eval::EvalSetScores> sets;
    for (const auto& name : {"standard", "adversarial"}) {
        if (!results_json.contains(name)) continue;
        eval::EvalSetScores set;
        set.set_name = name;
        for (const auto& rj : results_json[name])
            set.results.push_back(judge::judge_result_from_json(rj));
        sets.push_back(std::move(set));
    }
    if (sets.empty()) throw FormatError("judge results carry no evaluation sets");

    run.log("report over " + std::to_string(sets.size()) + " sets, " +
            std::to_string(annotations.pair_count()) + " annotated pairs");
    eval::ReportBundle bundle = eval::generate_report(sets, annotations, run.config_hash());
    run.write_artifact("report.json", bundle.machine.dump(2) + "\n");
    run.write_artifact("report.txt", bundle.text);
}

inline void command_export_attention(const Config& config, RunDirectory& run) {
    IngestResult ingest = ingest_dataset(config.get("preprocessed"),
                                         dataset_format_from_name(config.get("dataset_format")));
    auto examples = expand_records(ingest.records, /*require_graphs=*/true);
    slm::LoadedCheckpoint loaded = slm::load_checkpoint(config.get("checkpoint"));

    const slm::DialoguePair* pair = nullptr;
    if (config.has("pair_id")) {
        for (const auto& ex : examples)
            if (ex.pair.id == config.get("pair_id")) pair = &ex.pair;
        if (!pair) throw ConfigError("pair_id not found in dataset: " + config.get("pair_id"));
    } else {
        if (examples.empty()) throw FormatError("dataset holds no pairs");
        pair = &examples.front().pair;
    }

    slm::AttentionBundle bundle = slm::export_attention_maps(loaded.model, *pair);
    std::filesystem::create_directories(run.artifact_path("attention"));
    for (const auto& path : slm::write_attention_bundle(bundle, run.artifact_path("attention")))
        run.record_artifact("attention/" + std::filesystem::path(path).filename().string());
    nlohmann::json summary = {{"pair_id", pair->id}, {"maps", bundle.maps.size()}};
    run.write_artifact("attention_summary.json", summary.dump(2) + "\n");
}

}  // namespace commands_detail

inline const std::set<std::string>& known_commands() {
    static const std::set<std::string> commands = {"preprocess-amr", "train-slm", "score",
                                                   "judge", "evaluate", "export-attention"};
    return commands;
}

inline std::vector<std::string> command_inputs(const std::string& command, const Config& config) {
    if (command == "preprocess-amr") return {config.get("dataset")};
    if (command == "train-slm") return {config.get("preprocessed")};
    if (command == "score" || command == "export-attention")
        return {config.get("preprocessed"), config.get("checkpoint")};
    if (command == "judge") {
        std::vector<std::string> inputs = {config.get("preprocessed"), config.get("checkpoint")};
        if (config.get("judge_client") == "replay")
            inputs.push_back(config.get("replay_transcript"));
        return inputs;
    }
    if (command == "evaluate") return {config.get("judge_results"), config.get("annotations")};
    throw ConfigError("unknown command: " + command);
}

inline CommandOutcome run_command(const std::string& command, Config config) {
    CommandOutcome outcome;
    std::string out_dir = config.get("out_dir");
    // warm starts default to a finetuning rate; resolve it into the snapshot
    if (command == "train-slm" && config.has("pretrained_sequence") &&
        !config.was_set("learning_rate"))
        config.set("learning_rate", "2e-05");
    try {
        std::vector<std::string> inputs = command_inputs(command, config);
        RunDirectory run(out_dir, command, config, inputs);
        outcome.run_dir = run.path();
        if (command == "preprocess-amr")
            commands_detail::command_preprocess(config, run);
        else if (command == "train-slm")
            commands_detail::command_train(config, run);
        else if (command == "score")
            commands_detail::command_score(config, run);
        else if (command == "judge")
            commands_detail::command_judge(config, run);
        else if (command == "evaluate")
            commands_detail::command_evaluate(config, run);
        else if (command == "export-attention")
            commands_detail::command_export_attention(config, run);
        run.finalize();
    } catch (const std::exception& e) {
        outcome.exit_code = 1;
        outcome.error = e.what();
        nlohmann::json error_record = {{"command", command}, {"error", e.what()}};
        std::string where = outcome.run_dir.empty() ? out_dir : outcome.run_dir;
        std::filesystem::create_directories(where);
        write_file(where + "/error.json", error_record.dump(2) + "\n");
    }
    return outcome;
}

}  // namespace dialeval::cli
