#pragma once

// Training objectives. The classification term is full binary cross-entropy
// (negatives contribute gradient, not just positives). The contrastive term
// is an InfoNCE-style alignment of sequence and graph representations:
//
//   term_i = -log  exp(sim_i+/tau) / (exp(sim_i+/tau) + sum_j exp(sim_j-/tau))
//
// averaged over positive examples i, with sim = cosine similarity of the
// pooled sequence/graph vectors and j ranging over the batch negatives.
// Probabilities are clamped to [1e-7, 1-1e-7] before any log.

#include <vector>

#include "dialeval/nn/tape.hpp"

namespace dialeval::train {

using nn::Tape;
using nn::Var;

inline constexpr double kProbClamp = 1e-7;

// probs: one 1x2 row per example (column 1 = positive class).
inline Var classification_loss(const std::vector<Var>& probs, const std::vector<int>& labels) {
    if (probs.empty() || probs.size() != labels.size())
        throw DegenerateBatch("classification loss needs one probability row per label");
    std::vector<Var> terms;
    for (size_t i = 0; i < probs.size(); ++i) {
        if (labels[i] != 0 && labels[i] != 1) throw DegenerateBatch("labels must be 0 or 1");
        Var p_true = nn::pick(probs[i], 0, labels[i] == 1 ? 1 : 0);
        terms.push_back(nn::scale(nn::log_(nn::clamp(p_true, kProbClamp, 1.0 - kProbClamp)), -1.0));
    }
    return nn::mean_all(nn::vstack(terms));
}

inline double classification_loss_value(const std::vector<double>& p_positive,
                                        const std::vector<int>& labels) {
    Tape tape;
    std::vector<Var> probs;
    for (double p : p_positive) {
        nn::Mat row(1, 2);
        row << 1.0 - p, p;
        probs.push_back(tape.input(row));
    }
    return classification_loss(probs, labels).scalar();
}

// Pooled per-example representations captured during the batch forward pass.
struct BatchRepresentations {
    std::vector<Var> pooled_seq;
    std::vector<Var> pooled_graph;
    std::vector<int> labels;
};

inline Var contrastive_loss(const BatchRepresentations& batch, double tau) {
    if (batch.pooled_seq.size() != batch.pooled_graph.size() ||
        batch.pooled_seq.size() != batch.labels.size())
        throw DegenerateBatch("batch representation lists disagree in length");
    std::vector<size_t> positives, negatives;
    for (size_t i = 0; i < batch.labels.size(); ++i)
        (batch.labels[i] == 1 ? positives : negatives).push_back(i);
    if (positives.empty() || negatives.empty())
        throw DegenerateBatch("contrastive loss needs at least one positive and one negative");

    std::vector<Var> neg_exp;
    for (size_t j : negatives) {
        Var sim = nn::cosine_similarity(batch.pooled_seq[j], batch.pooled_graph[j]);
        neg_exp.push_back(nn::exp_(nn::scale(sim, 1.0 / tau)));
    }
    Var neg_sum = nn::sum_all(nn::vstack(neg_exp));

    std::vector<Var> terms;
    for (size_t i : positives) {
        Var sim = nn::cosine_similarity(batch.pooled_seq[i], batch.pooled_graph[i]);
        Var pos_exp = nn::exp_(nn::scale(sim, 1.0 / tau));
        Var frac = nn::div(pos_exp, nn::add(pos_exp, neg_sum));
        terms.push_back(nn::scale(nn::log_(frac), -1.0));
    }
    return nn::mean_all(nn::vstack(terms));
}

// Value-level variant over plain vectors, for oracle checks and callers that
// already hold pooled representations.
inline double contrastive_loss_value(const std::vector<nn::Mat>& pooled_seq,
                                     const std::vector<nn::Mat>& pooled_graph,
                                     const std::vector<int>& labels, double tau) {
    Tape tape;
    BatchRepresentations batch;
    for (const auto& m : pooled_seq) batch.pooled_seq.push_back(tape.input(m));
    for (const auto& m : pooled_graph) batch.pooled_graph.push_back(tape.input(m));
    batch.labels = labels;
    return contrastive_loss(batch, tau).scalar();
}

struct LossBreakdown {
    double l_cls = 0.0;
    double l_contrastive = 0.0;
    double l_total = 0.0;
};

inline LossBreakdown make_breakdown(double l_cls, double l_contrastive) {
    return {l_cls, l_contrastive, l_cls + l_contrastive};
}

// l_total = l_cls + l_contrastive; the contrastive term joins only when
// enabled (the "w/o CL" ablation zeroes it).
inline Var total_loss(Var l_cls, const BatchRepresentations& batch, double tau,
                      bool use_contrastive, LossBreakdown* breakdown = nullptr) {
    if (!use_contrastive) {
        if (breakdown) *breakdown = make_breakdown(l_cls.scalar(), 0.0);
        return l_cls;
    }
    Var l_c = contrastive_loss(batch, tau);
    if (breakdown) *breakdown = make_breakdown(l_cls.scalar(), l_c.scalar());
    return nn::add(l_cls, l_c);
}

}  // namespace dialeval::train
