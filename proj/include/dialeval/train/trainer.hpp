#pragma once

// The training loop: batched forward over both encoders, combined loss,
// Adam with gradient clipping, per-epoch validation, best-checkpoint
// tracking. Deterministic for a fixed seed on a single worker.

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <vector>

#include "dialeval/slm/scorer.hpp"
#include "dialeval/train/adam.hpp"
#include "dialeval/train/losses.hpp"
#include "dialeval/train/sampler.hpp"

namespace dialeval::train {

struct AblationConfig {
    bool use_gate = true;          // false freezes g at 0.5 ("w/o GM")
    bool use_contrastive = true;   // false drops the contrastive term ("w/o CL")
    slm::EncoderMode encoder_mode = slm::EncoderMode::Both;

    slm::ForwardOptions forward_options() const {
        slm::ForwardOptions opt;
        opt.mode = encoder_mode;
        opt.use_gate = use_gate;
        return opt;
    }

    // single-branch variants have no second representation to align
    bool contrastive_active() const {
        return use_contrastive && encoder_mode == slm::EncoderMode::Both;
    }
};

struct TrainConfig {
    int epochs = 20;
    int batch_size = 16;
    double learning_rate = 1e-3;
    double tau = 0.1;
    double grad_clip = 1.0;
    std::uint64_t seed = 1;
};

struct EpochMetrics {
    int epoch = 0;
    double l_cls = 0.0;
    double l_contrastive = 0.0;
    double val_accuracy = 0.0;
};

struct TrainResult {
    slm::SlmModel model;  // best validation checkpoint
    std::vector<EpochMetrics> history;
    int best_epoch = -1;
    double best_val_accuracy = 0.0;
};

inline double evaluate_accuracy(slm::SlmModel& model, const std::vector<TrainingExample>& split,
                                const slm::ForwardOptions& options = {}) {
    if (split.empty()) return 0.0;
    int correct = 0;
    for (const auto& ex : split) {
        slm::SlmScore score = slm::score_pair(model, ex.pair, options);
        int predicted = score.p_positive >= score.p_negative ? 1 : 0;
        if (predicted == ex.label) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(split.size());
}

// Loss over the given examples without touching the parameters.
inline LossBreakdown compute_batch_loss(slm::SlmModel& model,
                                        const std::vector<TrainingExample>& dataset,
                                        const std::vector<size_t>& batch_indices,
                                        const TrainConfig& config,
                                        const AblationConfig& ablation) {
    Tape tape;
    slm::TapeModel tm = slm::TapeModel::load(tape, model);
    slm::ForwardOptions options = ablation.forward_options();
    std::vector<Var> probs;
    BatchRepresentations reps;
    for (size_t idx : batch_indices) {
        const TrainingExample& ex = dataset[idx];
        slm::PairForward fwd = slm::forward_pair(tape, tm, model, ex.pair, options);
        probs.push_back(fwd.probs);
        reps.labels.push_back(ex.label);
        if (options.mode == slm::EncoderMode::Both) {
            reps.pooled_seq.push_back(fwd.pooled_seq);
            reps.pooled_graph.push_back(fwd.pooled_graph);
        }
    }
    Var l_cls = classification_loss(probs, reps.labels);
    LossBreakdown breakdown;
    total_loss(l_cls, reps, config.tau, ablation.contrastive_active(), &breakdown);
    return breakdown;
}

// One optimisation step over the given examples; returns the loss breakdown.
inline LossBreakdown train_step(slm::SlmModel& model, AdamOptimizer& optimizer,
                                const std::vector<TrainingExample>& dataset,
                                const std::vector<size_t>& batch_indices,
                                const TrainConfig& config, const AblationConfig& ablation) {
    Tape tape;
    slm::TapeModel tm = slm::TapeModel::load(tape, model);
    slm::ForwardOptions options = ablation.forward_options();

    std::vector<Var> probs;
    BatchRepresentations reps;
    for (size_t idx : batch_indices) {
        const TrainingExample& ex = dataset[idx];
        slm::PairForward fwd = slm::forward_pair(tape, tm, model, ex.pair, options);
        probs.push_back(fwd.probs);
        reps.labels.push_back(ex.label);
        if (options.mode == slm::EncoderMode::Both) {
            reps.pooled_seq.push_back(fwd.pooled_seq);
            reps.pooled_graph.push_back(fwd.pooled_graph);
        }
    }

    std::vector<int> labels = reps.labels;
    Var l_cls = classification_loss(probs, labels);
    LossBreakdown breakdown;
    Var loss = total_loss(l_cls, reps, config.tau, ablation.contrastive_active(), &breakdown);

    if (!std::isfinite(breakdown.l_total))
        throw TrainingError("non-finite loss: cls=" + std::to_string(breakdown.l_cls) +
                            " contrastive=" + std::to_string(breakdown.l_contrastive));

    tape.backward(loss);
    std::vector<nn::Mat> grads;
    grads.reserve(tm.named.size());
    for (const auto& [name, var] : tm.named) grads.push_back(tape.grad(var));
    auto params = model.parameters();
    optimizer.step(params, std::move(grads), config.grad_clip);
    return breakdown;
}

inline TrainResult train_slm(slm::SlmModel model, const std::vector<TrainingExample>& train_set,
                         const std::vector<TrainingExample>& val_set, const TrainConfig& config,
                         const AblationConfig& ablation = {}) {
    if (train_set.empty()) throw TrainingError("empty training set");
    AdamOptimizer optimizer(config.learning_rate);
    std::mt19937_64 seed_stream(config.seed);

    TrainResult result;
    result.model = model;

    int steps = static_cast<int>(
        (train_set.size() + config.batch_size - 1) / static_cast<size_t>(config.batch_size));
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        double sum_cls = 0, sum_con = 0;
        for (int step = 0; step < steps; ++step) {
            auto batch =
                sample_training_batch(train_set, config.batch_size, seed_stream());
            LossBreakdown b;
            try {
                b = train_step(model, optimizer, train_set, batch, config, ablation);
            } catch (const TrainingError& e) {
                throw TrainingError("epoch " + std::to_string(epoch) + " step " +
                                    std::to_string(step) + ": " + e.what());
            }
            sum_cls += b.l_cls;
            sum_con += b.l_contrastive;
        }
        EpochMetrics m;
        m.epoch = epoch;
        m.l_cls = sum_cls / steps;
        m.l_contrastive = sum_con / steps;
        m.val_accuracy = evaluate_accuracy(model, val_set, ablation.forward_options());
        result.history.push_back(m);
        if (m.val_accuracy > result.best_val_accuracy || result.best_epoch < 0) {
            result.best_val_accuracy = m.val_accuracy;
            result.best_epoch = epoch;
            result.model = model;
        }
    }
    return result;
}

// Columnar metric history: epoch, l_cls, l_contrastive, val_accuracy.
inline std::string render_metric_history(const std::vector<EpochMetrics>& history) {
    std::ostringstream out;
    out << "epoch\tl_cls\tl_contrastive\tval_accuracy\n" << std::setprecision(17);
    for (const auto& m : history)
        out << m.epoch << '\t' << m.l_cls << '\t' << m.l_contrastive << '\t' << m.val_accuracy
            << '\n';
    return out.str();
}

}  // namespace dialeval::train
