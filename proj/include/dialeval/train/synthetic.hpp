#pragma once

// Synthetic separable benchmark for the classifier and its ablations.
//
// Positives answer on topic; their graphs attach the topic under :ARG1 of a
// "recommend" head. Adversarial negatives reuse the positive surface text
// verbatim (maximal lexical overlap, indistinguishable to the sequence
// branch) while their graphs demote the copied topic word to a :mod of an
// off-topic "worth" head. Random negatives come from another topic's turn and
// carry an off-topic but positive-shaped graph, so only the sequence branch
// (via the discourse marker) can catch them. Each branch therefore has its
// own reachable slice, and the fused model can solve both.

#include <string>
#include <vector>

#include "dialeval/amr/merge.hpp"
#include "dialeval/amr/penman.hpp"
#include "dialeval/slm/vocab.hpp"
#include "dialeval/train/examples.hpp"
#include "dialeval/train/trainer.hpp"

namespace dialeval::train {

struct SyntheticOptions {
    int examples = 200;             // block pattern: 5 positive, 3 adversarial, 2 random
    double holdout_fraction = 0.2;  // stratified per category
};

struct SyntheticDataset {
    std::vector<TrainingExample> train;
    std::vector<TrainingExample> heldout;
    slm::Vocabulary vocab;            // built from the train split
    slm::ConceptVocab concepts;
    slm::RelationVocab relations;
};

namespace synthetic_detail {

inline const std::vector<std::string>& topics() {
    static const std::vector<std::string> t = {"garden", "canyon", "piano", "soccer", "coffee",
                                               "novel",  "subway", "market", "violin", "castle"};
    return t;
}

inline slm::DialoguePair make_pair(const std::string& id, const std::string& topic,
                                   const std::string& response, const std::string& resp_graph) {
    slm::DialoguePair pair;
    pair.id = id;
    pair.context = {"what about the " + topic, "is it worth it"};
    pair.response = response;
    pair.context_graph =
        amr::parse_penman("(worth :polarity (amr-unk) :ARG1 (" + topic + "))");
    pair.response_graph = amr::parse_penman(resp_graph);
    pair.has_graphs = true;
    return pair;
}

}  // namespace synthetic_detail

inline SyntheticDataset make_synthetic_benchmark(const SyntheticOptions& options = {}) {
    using synthetic_detail::make_pair;
    const auto& topics = synthetic_detail::topics();
    const int kTopics = static_cast<int>(topics.size());

    std::vector<TrainingExample> positives, adversarials, randoms;
    for (int i = 0; i < options.examples; ++i) {
        int block = i / 10;
        int slot = i % 10;
        const std::string& topic = topics[(block + slot) % kTopics];
        const std::string& off_topic = topics[(block + slot + 3) % kTopics];
        std::string id = "synth-" + std::to_string(i);

        if (slot < 5) {
            positives.push_back(TrainingExample::positive(
                make_pair(id, topic, "yes the " + topic + " is really worth it",
                          "(recommend :ARG1 (" + topic + ") :degree (really))")));
        } else if (slot < 8) {
            // same words as the positive answer; only the graph tells them apart
            adversarials.push_back(TrainingExample::negative(
                make_pair(id, topic, "yes the " + topic + " is really worth it",
                          "(worth :ARG1 (" + off_topic + ") :mod (" + topic + "))"),
                NegativeKind::Adversarial));
        } else {
            randoms.push_back(TrainingExample::negative(
                make_pair(id, topic, "anyway the " + off_topic + " is really worth it",
                          "(recommend :ARG1 (" + off_topic + ") :degree (really))"),
                NegativeKind::Random));
        }
    }

    SyntheticDataset out;
    auto split = [&](std::vector<TrainingExample>& pool) {
        size_t train_n = pool.size() - static_cast<size_t>(pool.size() * options.holdout_fraction);
        for (size_t i = 0; i < pool.size(); ++i)
            (i < train_n ? out.train : out.heldout).push_back(std::move(pool[i]));
    };
    split(positives);
    split(adversarials);
    split(randoms);

    std::vector<std::string> texts;
    for (const auto& ex : out.train) {
        for (const auto& turn : ex.pair.context) texts.push_back(turn);
        texts.push_back(ex.pair.response);
        amr::AmrGraph merged =
            amr::merge_context_response_graphs(ex.pair.context_graph, ex.pair.response_graph);
        out.concepts.add_graph(merged);
        out.relations.add_graph(merged);
    }
    out.vocab = slm::Vocabulary::build(texts);
    return out;
}

// The canonical ablation experiment on the benchmark: full model vs
// graph-only vs sequence-only, identical budget each (d=8, 20 epochs).
struct AblationBenchmarkResult {
    double full = 0.0;
    double graph_only = 0.0;
    double sequence_only = 0.0;
    TrainResult full_run;
};

inline AblationBenchmarkResult run_ablation_benchmark(const SyntheticDataset& data,
                                                      int epochs = 20) {
    slm::SlmConfig mc;
    mc.width = 8;
    mc.seq_layers = 2;
    mc.seq_heads = 2;
    mc.ff_multiplier = 2;
    mc.graph_layers = 2;

    TrainConfig tc;
    tc.epochs = epochs;
    tc.batch_size = 16;
    tc.learning_rate = 3e-3;
    tc.seed = 7;

    auto fresh = [&] {
        return slm::SlmModel::init(mc, data.vocab, data.concepts, data.relations, 1);
    };
    AblationConfig full_cfg, graph_cfg, seq_cfg;
    graph_cfg.encoder_mode = slm::EncoderMode::GraphOnly;
    seq_cfg.encoder_mode = slm::EncoderMode::SequenceOnly;

    AblationBenchmarkResult out;
    out.full_run = train_slm(fresh(), data.train, data.heldout, tc, full_cfg);
    out.full = out.full_run.best_val_accuracy;
    out.graph_only = train_slm(fresh(), data.train, data.heldout, tc, graph_cfg).best_val_accuracy;
    out.sequence_only =
        train_slm(fresh(), data.train, data.heldout, tc, seq_cfg).best_val_accuracy;
    return out;
}

}  // namespace dialeval::train
