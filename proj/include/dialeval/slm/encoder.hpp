#pragma once

// Forward passes for both encoders, built on the autodiff tape.
//
// Sequence side: a standard transformer encoder (multi-head self-attention,
// feed-forward, residuals, layer norm, sinusoidal positions).
//
// Graph side: relation-aware attention over all node pairs. Logits are
//   e_ij = (Wq h_i)^T (Wk h_j + Wr r_ij) / sqrt(d)
// and values are (Wv h_j + Wr r_ij), where r_ij is the embedding of the edge
// label for an edge i->j, SELF on the diagonal and NO-EDGE everywhere else.
// Layers apply this aggregation directly, matching the formulation; there is
// no feed-forward sublayer on the graph side.

#include <string>
#include <vector>

#include "dialeval/amr/graph.hpp"
#include "dialeval/nn/tape.hpp"
#include "dialeval/slm/model.hpp"
#include "dialeval/slm/vocab.hpp"

namespace dialeval::slm {

using nn::Tape;
using nn::Var;

// All model parameters registered on one tape, in SlmModel::parameters()
// order so gradients can be zipped back.
struct TapeModel {
    struct SeqLayer {
        Var wq, wk, wv, wh, ln1_gain, ln1_bias, ff1, ff1_bias, ff2, ff2_bias, ln2_gain, ln2_bias;
    };
    struct GraphLayer {
        Var wq, wk, wv, wr;
    };

    Var seq_embedding;
    std::vector<SeqLayer> seq_layers;
    Var concept_embedding, relation_embedding;
    std::vector<GraphLayer> graph_layers;
    Var gate_wg, gate_bg, cls_wf, cls_bf;
    int width = 0;
    int heads = 1;

    std::vector<std::pair<std::string, Var>> named;

    static TapeModel load(Tape& tape, SlmModel& model) {
        TapeModel tm;
        tm.width = model.config.width;
        tm.heads = model.config.seq_heads;
        auto params = model.parameters();
        std::vector<Var> vars;
        vars.reserve(params.size());
        for (auto& p : params) {
            Var v = tape.input(*p.tensor);
            vars.push_back(v);
            tm.named.emplace_back(p.name, v);
        }
        size_t at = 0;
        tm.seq_embedding = vars[at++];
        for (size_t l = 0; l < model.seq.layers.size(); ++l) {
            SeqLayer sl;
            sl.wq = vars[at++];
            sl.wk = vars[at++];
            sl.wv = vars[at++];
            sl.wh = vars[at++];
            sl.ln1_gain = vars[at++];
            sl.ln1_bias = vars[at++];
            sl.ff1 = vars[at++];
            sl.ff1_bias = vars[at++];
            sl.ff2 = vars[at++];
            sl.ff2_bias = vars[at++];
            sl.ln2_gain = vars[at++];
            sl.ln2_bias = vars[at++];
            tm.seq_layers.push_back(sl);
        }
        tm.concept_embedding = vars[at++];
        tm.relation_embedding = vars[at++];
        for (size_t l = 0; l < model.graph.layers.size(); ++l) {
            GraphLayer gl;
            gl.wq = vars[at++];
            gl.wk = vars[at++];
            gl.wv = vars[at++];
            gl.wr = vars[at++];
            tm.graph_layers.push_back(gl);
        }
        tm.gate_wg = vars[at++];
        tm.gate_bg = vars[at++];
        tm.cls_wf = vars[at++];
        tm.cls_bf = vars[at++];
        return tm;
    }
};

struct SequenceForward {
    Var states;  // L x d, one row per input position (padding included)
    Var pooled;  // 1 x d, masked mean
    std::vector<std::string> labels;                // token strings per row
    std::vector<std::vector<nn::Mat>> attention;    // [layer][head], L x L
};

inline SequenceForward encode_sequence(Tape& tape, const TapeModel& tm,
                                       const TokenSequence& seq, const Vocabulary& vocab) {
    if (seq.context_len < 1 || seq.response_len < 1)
        throw ShapeError("sequence must contain context and response tokens");
    for (int id : seq.ids)
        if (id < 0 || id >= tm.seq_embedding.rows())
            throw ShapeError("token id outside vocabulary: " + std::to_string(id));

    int length = static_cast<int>(seq.ids.size());
    int d = tm.width;
    int heads = tm.heads;
    int dh = d / heads;

    SequenceForward out;
    for (int id : seq.ids) out.labels.push_back(vocab.word(id));

    Var x = nn::add(nn::rows_gather(tm.seq_embedding, seq.ids),
                    tape.input(positional_encoding(length, d)));

    for (const auto& layer : tm.seq_layers) {
        Var q = nn::matmul(x, layer.wq);
        Var k = nn::matmul(x, layer.wk);
        Var v = nn::matmul(x, layer.wv);
        std::vector<Var> head_out;
        std::vector<nn::Mat> head_maps;
        for (int h = 0; h < heads; ++h) {
            Var qh = nn::slice_cols(q, h * dh, dh);
            Var kh = nn::slice_cols(k, h * dh, dh);
            Var vh = nn::slice_cols(v, h * dh, dh);
            Var logits = nn::scale(nn::matmul(qh, nn::transpose(kh)), 1.0 / std::sqrt(dh));
            Var probs = nn::softmax_rows(logits, seq.valid);
            head_maps.push_back(probs.value());
            head_out.push_back(nn::matmul(probs, vh));
        }
        out.attention.push_back(std::move(head_maps));
        Var attn = nn::matmul(nn::hstack(head_out), layer.wh);
        x = nn::layer_norm_rows(nn::add(x, attn), layer.ln1_gain, layer.ln1_bias);
        Var ff = nn::relu(nn::add_row_broadcast(nn::matmul(x, layer.ff1), layer.ff1_bias));
        ff = nn::add_row_broadcast(nn::matmul(ff, layer.ff2), layer.ff2_bias);
        x = nn::layer_norm_rows(nn::add(x, ff), layer.ln2_gain, layer.ln2_bias);
    }

    out.states = x;
    out.pooled = nn::mean_rows(x, seq.valid);
    return out;
}

struct GraphForward {
    Var states;  // M x d, one row per node
    Var pooled;  // 1 x d
    std::vector<std::string> labels;              // node concepts, graph order
    std::vector<std::vector<nn::Mat>> attention;  // [layer][head=0], M x M
};

// Relation id lookup table for all ordered node pairs; the first edge i->j in
// edge order decides the label when parallel edges exist.
inline std::vector<std::vector<int>> relation_id_matrix(const amr::AmrGraph& g,
                                                        const RelationVocab& relations) {
    int m = static_cast<int>(g.nodes.size());
    std::unordered_map<std::string, int> order;
    for (int i = 0; i < m; ++i) order[g.nodes[i].id] = i;
    std::vector<std::vector<int>> ids(m, std::vector<int>(m, RelationVocab::kNoEdge));
    for (int i = 0; i < m; ++i) ids[i][i] = RelationVocab::kSelf;
    for (const auto& e : g.edges) {
        int i = order.at(e.source), j = order.at(e.target);
        if (ids[i][j] == RelationVocab::kNoEdge) ids[i][j] = relations.id(e.relation);
    }
    return ids;
}

inline GraphForward encode_graph(const TapeModel& tm, const amr::AmrGraph& g,
                                 const ConceptVocab& concepts, const RelationVocab& relations) {
    int m = static_cast<int>(g.nodes.size());
    if (m == 0) throw ShapeError("graph encoder needs at least one node");
    int d = tm.width;

    std::vector<int> concept_ids;
    GraphForward out;
    for (const auto& n : g.nodes) {
        concept_ids.push_back(concepts.id(n.label));
        out.labels.push_back(n.label);
    }
    auto rel_ids = relation_id_matrix(g, relations);

    Var x = nn::rows_gather(tm.concept_embedding, concept_ids);
    for (const auto& layer : tm.graph_layers) {
        Var q = nn::matmul(x, layer.wq);
        Var k = nn::matmul(x, layer.wk);
        Var v = nn::matmul(x, layer.wv);
        std::vector<Var> rows;
        std::vector<Var> attn_rows;
        for (int i = 0; i < m; ++i) {
            Var rel = nn::rows_gather(tm.relation_embedding, rel_ids[i]);  // M x d
            Var rel_proj = nn::matmul(rel, layer.wr);                      // M x d
            Var qi = nn::rows_gather(q, {i});                              // 1 x d
            Var logits = nn::scale(nn::matmul(qi, nn::transpose(nn::add(k, rel_proj))),
                                   1.0 / std::sqrt(d));
            Var probs = nn::softmax_rows(logits);  // 1 x M over every node
            attn_rows.push_back(probs);
            rows.push_back(nn::matmul(probs, nn::add(v, rel_proj)));
        }
        Var attn_map = nn::vstack(attn_rows);
        out.attention.push_back({attn_map.value()});
        x = nn::vstack(rows);
    }

    out.states = x;
    out.pooled = nn::mean_rows(x);
    return out;
}

}  // namespace dialeval::slm
