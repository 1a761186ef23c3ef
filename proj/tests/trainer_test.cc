#include "dialeval/train/trainer.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "dialeval/train/synthetic.hpp"
#include "gtest/gtest.h"

using namespace dialeval;
using namespace dialeval::train;

namespace {

slm::SlmConfig toy_config() {
    slm::SlmConfig c;
    c.width = 8;
    c.seq_layers = 2;
    c.seq_heads = 2;
    c.ff_multiplier = 2;
    c.graph_layers = 2;
    return c;
}

slm::SlmModel toy_model(const SyntheticDataset& data, std::uint64_t seed) {
    return slm::SlmModel::init(toy_config(), data.vocab, data.concepts, data.relations, seed);
}

TEST(Sampler, BalancedAndDeterministic) {
    SyntheticDataset data = make_synthetic_benchmark({40, 0.0});
    auto a = sample_training_batch(data.train, 4, 99);
    auto b = sample_training_batch(data.train, 4, 99);
    EXPECT_EQ(a, b);
    int pos = 0;
    for (size_t idx : a) pos += data.train[idx].label;
    EXPECT_EQ(pos, 2);

    auto odd = sample_training_batch(data.train, 5, 7);
    pos = 0;
    for (size_t idx : odd) pos += data.train[idx].label;
    EXPECT_EQ(pos, 3);  // positives get the extra slot
}

TEST(Sampler, NegativePoolsMixUniformly) {
    SyntheticDataset data = make_synthetic_benchmark({200, 0.0});
    // equalize the two negative pools so the uniform-mix check targets 0.5
    std::vector<TrainingExample> ds;
    int adv = 0, rnd = 0;
    for (const auto& ex : data.train) {
        if (ex.negative_kind == NegativeKind::Adversarial && adv < 40 && ++adv) ds.push_back(ex);
        if (ex.negative_kind == NegativeKind::Random && rnd < 40 && ++rnd) ds.push_back(ex);
        if (ex.label == 1) ds.push_back(ex);
    }
    int adversarial = 0, total = 0;
    for (int draw = 0; draw < 1000; ++draw) {
        auto batch = sample_training_batch(ds, 8, 1000 + draw);
        for (size_t idx : batch) {
            if (ds[idx].label == 1) continue;
            ++total;
            if (ds[idx].negative_kind == NegativeKind::Adversarial) ++adversarial;
        }
    }
    double fraction = static_cast<double>(adversarial) / total;
    EXPECT_NEAR(fraction, 0.5, 0.05);
}

TEST(Sampler, DegenerateDatasetThrows) {
    SyntheticDataset data = make_synthetic_benchmark({20, 0.0});
    std::vector<TrainingExample> only_pos;
    for (const auto& ex : data.train)
        if (ex.label == 1) only_pos.push_back(ex);
    EXPECT_THROW(sample_training_batch(only_pos, 4, 1), DegenerateBatch);
}

// Analytic gradients against central finite differences for the gate, the
// classifier, and the relation projection, under both loss terms.
TEST(Gradients, MatchFiniteDifferencesOnSmallInstances) {
    const double h = 1e-5;
    const double tol = 1e-4;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SyntheticDataset data = make_synthetic_benchmark({20, 0.0});
        slm::SlmModel model = toy_model(data, seed + 100);
        std::mt19937_64 rng(seed);
        model.gate.wg = nn::uniform(8, 1, -0.5, 0.5, rng);
        model.gate.bg = nn::uniform(1, 1, -0.5, 0.5, rng);
        model.classifier.wf = nn::uniform(8, 2, -0.5, 0.5, rng);
        model.classifier.bf = nn::uniform(1, 2, -0.5, 0.5, rng);

        std::vector<size_t> batch = sample_training_batch(data.train, 4, seed);
        TrainConfig config;
        config.tau = 0.4;
        AblationConfig ablation;

        auto loss_value = [&](bool contrastive_only) {
            Tape tape;
            slm::TapeModel tm = slm::TapeModel::load(tape, model);
            std::vector<Var> probs;
            BatchRepresentations reps;
            for (size_t idx : batch) {
                auto fwd = slm::forward_pair(tape, tm, model, data.train[idx].pair, {});
                probs.push_back(fwd.probs);
                reps.labels.push_back(data.train[idx].label);
                reps.pooled_seq.push_back(fwd.pooled_seq);
                reps.pooled_graph.push_back(fwd.pooled_graph);
            }
            if (contrastive_only) return contrastive_loss(reps, config.tau).scalar();
            return classification_loss(probs, reps.labels).scalar();
        };

        for (bool contrastive_only : {false, true}) {
            Tape tape;
            slm::TapeModel tm = slm::TapeModel::load(tape, model);
            std::vector<Var> probs;
            BatchRepresentations reps;
            for (size_t idx : batch) {
                auto fwd = slm::forward_pair(tape, tm, model, data.train[idx].pair, {});
                probs.push_back(fwd.probs);
                reps.labels.push_back(data.train[idx].label);
                reps.pooled_seq.push_back(fwd.pooled_seq);
                reps.pooled_graph.push_back(fwd.pooled_graph);
            }
            Var loss = contrastive_only ? contrastive_loss(reps, config.tau)
                                        : classification_loss(probs, reps.labels);
            tape.backward(loss);

            std::vector<std::pair<std::string, nn::Mat*>> checked = {
                {"gate.wg", &model.gate.wg},
                {"gate.bg", &model.gate.bg},
                {"classifier.wf", &model.classifier.wf},
                {"classifier.bf", &model.classifier.bf},
                {"graph.layer0.wr", &model.graph.layers[0].wr},
            };
            for (auto& [name, mat] : checked) {
                Var var;
                for (const auto& [pname, pvar] : tm.named)
                    if (pname == name) var = pvar;
                ASSERT_TRUE(var.valid()) << name;
                for (Eigen::Index i = 0; i < mat->rows(); ++i) {
                    for (Eigen::Index j = 0; j < mat->cols(); ++j) {
                        double keep = (*mat)(i, j);
                        (*mat)(i, j) = keep + h;
                        double up = loss_value(contrastive_only);
                        (*mat)(i, j) = keep - h;
                        double down = loss_value(contrastive_only);
                        (*mat)(i, j) = keep;
                        double fd = (up - down) / (2 * h);
                        double an = tape.grad(var)(i, j);
                        double rel = std::abs(an - fd) / std::max({1.0, std::abs(an), std::abs(fd)});
                        EXPECT_LE(rel, tol) << name << "(" << i << "," << j << ") seed " << seed
                                            << " contrastive=" << contrastive_only;
                    }
                }
            }
        }
    }
}

TEST(Gradients, TotalLossGradientIsSumOfComponents) {
    SyntheticDataset data = make_synthetic_benchmark({20, 0.0});
    slm::SlmModel model = toy_model(data, 77);
    std::mt19937_64 rng(3);
    model.classifier.wf = nn::uniform(8, 2, -0.5, 0.5, rng);
    std::vector<size_t> batch = sample_training_batch(data.train, 4, 5);

    auto grads_of = [&](int which) {  // 0 cls, 1 contrastive, 2 total
        Tape tape;
        slm::TapeModel tm = slm::TapeModel::load(tape, model);
        std::vector<Var> probs;
        BatchRepresentations reps;
        for (size_t idx : batch) {
            auto fwd = slm::forward_pair(tape, tm, model, data.train[idx].pair, {});
            probs.push_back(fwd.probs);
            reps.labels.push_back(data.train[idx].label);
            reps.pooled_seq.push_back(fwd.pooled_seq);
            reps.pooled_graph.push_back(fwd.pooled_graph);
        }
        Var l_cls = classification_loss(probs, reps.labels);
        Var l_c = contrastive_loss(reps, 0.4);
        Var loss = which == 0 ? l_cls : which == 1 ? l_c : nn::add(l_cls, l_c);
        tape.backward(loss);
        std::vector<nn::Mat> out;
        for (const auto& [name, var] : tm.named) out.push_back(tape.grad(var));
        return out;
    };

    auto cls = grads_of(0), con = grads_of(1), total = grads_of(2);
    for (size_t k = 0; k < total.size(); ++k)
        EXPECT_NEAR((total[k] - cls[k] - con[k]).cwiseAbs().maxCoeff(), 0.0, 1e-12);
}

TEST(Train, FirstBatchLossIsLogTwoPlusContrastive) {
    SyntheticDataset data = make_synthetic_benchmark({40, 0.0});
    slm::SlmModel model = toy_model(data, 11);
    TrainConfig config;
    auto batch = sample_training_batch(data.train, 16, 1);
    LossBreakdown b = compute_batch_loss(model, data.train, batch, config, {});
    EXPECT_NEAR(b.l_cls, std::log(2.0), 1e-12);  // zero-initialised classifier
    EXPECT_DOUBLE_EQ(b.l_total, b.l_cls + b.l_contrastive);
    EXPECT_GE(b.l_contrastive, 0.0);
}

TEST(Train, DeterministicHistories) {
    SyntheticDataset data = make_synthetic_benchmark({40, 0.2});
    TrainConfig config;
    config.epochs = 3;
    config.batch_size = 8;
    config.seed = 42;
    TrainResult a = train_slm(toy_model(data, 1), data.train, data.heldout, config);
    TrainResult b = train_slm(toy_model(data, 1), data.train, data.heldout, config);
    ASSERT_EQ(a.history.size(), b.history.size());
    for (size_t i = 0; i < a.history.size(); ++i) {
        EXPECT_EQ(a.history[i].l_cls, b.history[i].l_cls);
        EXPECT_EQ(a.history[i].l_contrastive, b.history[i].l_contrastive);
        EXPECT_EQ(a.history[i].val_accuracy, b.history[i].val_accuracy);
    }
}

TEST(Train, SeparableBenchmarkReachesHighAccuracyWithAblationOrdering) {
    auto started = std::chrono::steady_clock::now();
    SyntheticDataset data = make_synthetic_benchmark({200, 0.2});
    AblationBenchmarkResult r = run_ablation_benchmark(data);

    EXPECT_GE(r.full, 0.95);
    EXPECT_GE(r.full, r.graph_only);
    EXPECT_GE(r.graph_only, r.sequence_only);
    EXPECT_GE(r.full - r.sequence_only, 0.03);

    auto elapsed = std::chrono::duration_cast<std::chrono::seconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();
    EXPECT_LT(elapsed, 180);
    ::testing::Test::RecordProperty("full", r.full);
    ::testing::Test::RecordProperty("graph_only", r.graph_only);
    ::testing::Test::RecordProperty("sequence_only", r.sequence_only);
}

TEST(Train, NonFiniteLossAbortsWithDiagnostics) {
    SyntheticDataset data = make_synthetic_benchmark({20, 0.0});
    slm::SlmModel model = toy_model(data, 3);
    model.seq.layers[0].wq(0, 0) = std::numeric_limits<double>::quiet_NaN();
    TrainConfig config;
    config.epochs = 1;
    config.batch_size = 4;
    try {
        train_slm(std::move(model), data.train, data.train, config);
        FAIL() << "expected TrainingError";
    } catch (const TrainingError& e) {
        EXPECT_NE(std::string(e.what()).find("non-finite loss"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("epoch 0"), std::string::npos);
    }
}

TEST(EvaluateAccuracy, AllCorrectToyPredictions) {
    SyntheticDataset data = make_synthetic_benchmark({20, 0.0});
    slm::SlmModel model = toy_model(data, 2);
    // doctor the classifier so argmax always equals the label via the bias
    std::vector<TrainingExample> singleton{data.train[0]};
    model.classifier.bf(0, data.train[0].label == 1 ? 1 : 0) = 50.0;
    EXPECT_DOUBLE_EQ(evaluate_accuracy(model, singleton), 1.0);
}

TEST(Train, MetricHistoryRendering) {
    std::vector<EpochMetrics> history{{0, 0.7, 0.3, 0.5}, {1, 0.6, 0.2, 0.75}};
    std::string text = render_metric_history(history);
    EXPECT_NE(text.find("epoch\tl_cls\tl_contrastive\tval_accuracy"), std::string::npos);
    EXPECT_NE(text.find("\n1\t"), std::string::npos);
}

}  // namespace
