#pragma once

// Gate fusion, classification head, and whole-pair scoring.
// The gate is computed from the sequence side only:
//   g = sigmoid(wg . pooled_seq + bg),  fused = g*pooled_seq + (1-g)*pooled_graph
// and both pooled states are mean-pooled to single vectors before gating so
// the convex combination is well defined for any sequence/graph lengths.

#include <optional>

#include "dialeval/amr/merge.hpp"
#include "dialeval/slm/encoder.hpp"
#include "dialeval/slm/pair.hpp"

namespace dialeval::slm {

enum class EncoderMode { Both, GraphOnly, SequenceOnly };

struct ForwardOptions {
    EncoderMode mode = EncoderMode::Both;
    bool use_gate = true;  // false freezes g at 0.5
};

struct SlmScore {
    double p_positive = 0.0;
    double p_negative = 0.0;
};

struct FusedRepresentation {
    Var pooled_seq;
    Var pooled_graph;
    Var gate;   // 1 x 1 in (0,1)
    Var fused;  // 1 x d
};

inline FusedRepresentation fuse_gate(Tape& tape, Var pooled_seq, Var pooled_graph, Var wg,
                                     Var bg, bool use_gate = true) {
    if (pooled_seq.cols() != pooled_graph.cols())
        throw ShapeError("fuse_gate: state widths differ");
    if (wg.rows() != pooled_seq.cols() || wg.cols() != 1)
        throw ShapeError("fuse_gate: gate weight must be d x 1");
    FusedRepresentation fr;
    fr.pooled_seq = pooled_seq;
    fr.pooled_graph = pooled_graph;
    if (use_gate) {
        fr.gate = nn::sigmoid(nn::add(nn::matmul(pooled_seq, wg), bg));
    } else {
        nn::Mat half(1, 1);
        half(0, 0) = 0.5;
        fr.gate = tape.input(half);
    }
    Var one_minus = nn::add_scalar(nn::scale(fr.gate, -1.0), 1.0);
    fr.fused = nn::add(nn::matmul(fr.gate, pooled_seq), nn::matmul(one_minus, pooled_graph));
    return fr;
}

// Softmax over the two class logits; column 1 is the positive class.
inline Var classify(Var fused, Var wf, Var bf) {
    if (wf.rows() != fused.cols() || wf.cols() != 2)
        throw ShapeError("classify: classifier weight must be d x 2");
    return nn::softmax_rows(nn::add(nn::matmul(fused, wf), bf));
}

struct PairForward {
    std::optional<SequenceForward> seq;
    std::optional<GraphForward> graph;
    Var pooled_seq;    // valid unless GraphOnly
    Var pooled_graph;  // valid unless SequenceOnly
    Var gate;          // valid only when both branches run
    Var fused;
    Var probs;  // 1 x 2

    SlmScore score() const { return {probs.value()(0, 1), probs.value()(0, 0)}; }
};

inline PairForward forward_pair(Tape& tape, const TapeModel& tm, const SlmModel& model,
                                const DialoguePair& pair, const ForwardOptions& options = {}) {
    PairForward out;
    if (options.mode != EncoderMode::GraphOnly) {
        TokenSequence seq = build_token_sequence(model.vocab, pair.context, pair.response);
        out.seq = encode_sequence(tape, tm, seq, model.vocab);
        out.pooled_seq = out.seq->pooled;
    }
    if (options.mode != EncoderMode::SequenceOnly) {
        if (!pair.has_graphs) throw ShapeError("pair has no AMR graphs attached");
        amr::AmrGraph merged =
            amr::merge_context_response_graphs(pair.context_graph, pair.response_graph);
        out.graph = encode_graph(tm, merged, model.concepts, model.relations);
        out.pooled_graph = out.graph->pooled;
    }

    switch (options.mode) {
        case EncoderMode::Both: {
            FusedRepresentation fr = fuse_gate(tape, out.pooled_seq, out.pooled_graph,
                                               tm.gate_wg, tm.gate_bg, options.use_gate);
            out.gate = fr.gate;
            out.fused = fr.fused;
            break;
        }
        case EncoderMode::GraphOnly:
            out.fused = out.pooled_graph;
            break;
        case EncoderMode::SequenceOnly:
            out.fused = out.pooled_seq;
            break;
    }
    out.probs = classify(out.fused, tm.cls_wf, tm.cls_bf);
    return out;
}

// Convenience entry point for inference; owns its tape.
inline SlmScore score_pair(SlmModel& model, const DialoguePair& pair,
                           const ForwardOptions& options = {}) {
    Tape tape;
    TapeModel tm = TapeModel::load(tape, model);
    return forward_pair(tape, tm, model, pair, options).score();
}

// Two decimal places, the form the judge prompt embeds ("SLM score: 0.32").
inline std::string format_slm_score(double p_positive) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.2f", p_positive);
    return buf;
}

}  // namespace dialeval::slm
