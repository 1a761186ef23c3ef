#include "dialeval/train/losses.hpp"

#include <cmath>
#include <random>

#include "gtest/gtest.h"

using namespace dialeval;
using namespace dialeval::train;

namespace {

// 2-d unit vectors make the cosine similarity an explicit dial.
nn::Mat unit_at(double target_cos) {
    nn::Mat m(1, 2);
    m << target_cos, std::sqrt(std::max(0.0, 1.0 - target_cos * target_cos));
    return m;
}

nn::Mat base_vec() {
    nn::Mat m(1, 2);
    m << 1.0, 0.0;
    return m;
}

TEST(ClassificationLoss, PerfectPredictionsGiveZero) {
    EXPECT_NEAR(classification_loss_value({1.0, 1.0, 0.0}, {1, 1, 0}), 0.0, 1e-6);
}

TEST(ClassificationLoss, CoinFlipGivesLogTwo) {
    EXPECT_NEAR(classification_loss_value({0.5, 0.5}, {1, 0}), std::log(2.0), 1e-12);
}

TEST(ClassificationLoss, HandComputedMixedBatch) {
    // p(correct) = 0.9 and 0.8
    double expect = -(std::log(0.9) + std::log(0.8)) / 2.0;
    EXPECT_NEAR(classification_loss_value({0.9, 0.2}, {1, 0}), expect, 1e-9);
    EXPECT_NEAR(expect, 0.1643, 5e-5);
}

TEST(ClassificationLoss, ClampsBeforeLog) {
    double v = classification_loss_value({0.0}, {1});
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_NEAR(v, -std::log(kProbClamp), 1e-9);
}

TEST(ContrastiveLoss, HandComputedTwoExampleCase) {
    // one positive with sim 1, one negative with sim 0, tau = 1:
    // -log(e / (e + 1)) = 0.31326...
    double loss = contrastive_loss_value({base_vec(), base_vec()},
                                         {unit_at(1.0), unit_at(0.0)}, {1, 0}, 1.0);
    double expect = -std::log(std::exp(1.0) / (std::exp(1.0) + 1.0));
    EXPECT_NEAR(loss, expect, 1e-6);
    EXPECT_NEAR(loss, 0.3133, 5e-5);
}

TEST(ContrastiveLoss, SaturatesToZero) {
    double loss = contrastive_loss_value({base_vec(), base_vec()},
                                         {unit_at(1.0), unit_at(-1.0)}, {1, 0}, 0.1);
    EXPECT_LT(loss, 1e-8);
    EXPECT_GE(loss, 0.0);
}

TEST(ContrastiveLoss, MonotoneInEachNegativeSimilarity) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> sim(-0.95, 0.95);
    std::uniform_int_distribution<int> batch_size(3, 8);
    for (int trial = 0; trial < 100; ++trial) {
        int n = batch_size(rng);
        std::vector<nn::Mat> hs, ha;
        std::vector<int> labels;
        std::vector<double> sims;
        for (int i = 0; i < n; ++i) {
            double s = sim(rng);
            sims.push_back(s);
            hs.push_back(base_vec());
            ha.push_back(unit_at(s));
            labels.push_back(i == 0 ? 1 : 0);  // one positive, rest negatives
        }
        double base = contrastive_loss_value(hs, ha, labels, 0.5);
        std::uniform_int_distribution<int> pick_neg(1, n - 1);
        int j = pick_neg(rng);
        std::uniform_real_distribution<double> delta(0.01, sims[j] + 0.999);
        ha[j] = unit_at(sims[j] - delta(rng));
        double lowered = contrastive_loss_value(hs, ha, labels, 0.5);
        EXPECT_LT(lowered, base) << "trial " << trial;
    }
}

TEST(ContrastiveLoss, InvariantToPositiveRescaling) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> val(-1, 1), scale_dist(0.1, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<nn::Mat> hs, ha;
        std::vector<int> labels{1, 1, 0, 0};
        for (int i = 0; i < 4; ++i) {
            nn::Mat a(1, 6), b(1, 6);
            for (int j = 0; j < 6; ++j) {
                a(0, j) = val(rng);
                b(0, j) = val(rng);
            }
            hs.push_back(a);
            ha.push_back(b);
        }
        double base = contrastive_loss_value(hs, ha, labels, 0.3);
        std::uniform_int_distribution<int> pick(0, 3);
        int k = pick(rng);
        hs[k] *= scale_dist(rng);
        ha[k] *= scale_dist(rng);
        double scaled = contrastive_loss_value(hs, ha, labels, 0.3);
        EXPECT_NEAR(base, scaled, 1e-9);
    }
}

TEST(ContrastiveLoss, DegenerateBatchThrows) {
    EXPECT_THROW(contrastive_loss_value({base_vec()}, {unit_at(0.5)}, {1}, 1.0), DegenerateBatch);
    EXPECT_THROW(contrastive_loss_value({base_vec()}, {unit_at(0.5)}, {0}, 1.0), DegenerateBatch);
}

TEST(TotalLoss, SumsComponentsExactly) {
    EXPECT_DOUBLE_EQ(make_breakdown(0.5, 0.3).l_total, 0.8);
    EXPECT_DOUBLE_EQ(make_breakdown(0.5, 0.0).l_total, 0.5);

    // through the tape, with the contrastive term switched off
    Tape tape;
    nn::Mat half(1, 1);
    half << 0.5;
    Var l_cls = tape.input(half);
    BatchRepresentations reps;
    LossBreakdown b;
    Var total = total_loss(l_cls, reps, 0.1, false, &b);
    EXPECT_DOUBLE_EQ(total.scalar(), 0.5);
    EXPECT_DOUBLE_EQ(b.l_contrastive, 0.0);
    EXPECT_DOUBLE_EQ(b.l_total, b.l_cls + b.l_contrastive);
}

TEST(TotalLoss, NonNegativeComponents) {
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> p(0.01, 0.99), sim(-0.9, 0.9);
    for (int trial = 0; trial < 50; ++trial) {
        EXPECT_GE(classification_loss_value({p(rng), p(rng)}, {1, 0}), 0.0);
        double c = contrastive_loss_value({base_vec(), base_vec()},
                                          {unit_at(sim(rng)), unit_at(sim(rng))}, {1, 0}, 0.7);
        EXPECT_GE(c, 0.0);
    }
}

}  // namespace
