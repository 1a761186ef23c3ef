#pragma once

// Parameter containers for the dual-encoder classifier and their
// initialization. Encoders start from Xavier-uniform weights; the gate and
// classifier start at zero so an untrained model is exactly symmetric
// (g = 0.5, p = 0.5).

#include <random>
#include <string>
#include <vector>

#include "dialeval/nn/init.hpp"
#include "dialeval/nn/tape.hpp"
#include "dialeval/slm/vocab.hpp"

namespace dialeval::slm {

using nn::Mat;

struct SlmConfig {
    int width = 256;      // hidden size d, shared by both encoders
    int seq_layers = 4;
    int seq_heads = 4;
    int ff_multiplier = 4;
    int graph_layers = 4;

    void validate() const {
        if (width <= 0 || seq_layers <= 0 || seq_heads <= 0 || graph_layers <= 0)
            throw ConfigError("model dimensions must be positive");
        if (width % seq_heads != 0)
            throw ConfigError("width must be divisible by the head count");
        if (width % 2 != 0) throw ConfigError("width must be even");
    }
};

struct SeqLayerParams {
    Mat wq, wk, wv, wh;        // d x d
    Mat ln1_gain, ln1_bias;    // 1 x d
    Mat ff1, ff1_bias;         // d x f, 1 x f
    Mat ff2, ff2_bias;         // f x d, 1 x d
    Mat ln2_gain, ln2_bias;    // 1 x d
};

struct SequenceEncoderParams {
    Mat embedding;  // vocab x d
    std::vector<SeqLayerParams> layers;
};

struct GraphLayerParams {
    Mat wq, wk, wv, wr;  // d x d each; wr maps relation embeddings
};

struct GraphEncoderParams {
    Mat concept_embedding;   // concepts x d
    Mat relation_embedding;  // relations x d
    std::vector<GraphLayerParams> layers;
};

struct GateParams {
    Mat wg;  // d x 1
    Mat bg;  // 1 x 1
};

struct ClassifierParams {
    Mat wf;  // d x 2, logit column 1 is the positive class
    Mat bf;  // 1 x 2
};

struct ParamRef {
    std::string name;
    Mat* tensor;
};

struct SlmModel {
    SlmConfig config;
    Vocabulary vocab;
    ConceptVocab concepts;
    RelationVocab relations;
    SequenceEncoderParams seq;
    GraphEncoderParams graph;
    GateParams gate;
    ClassifierParams classifier;

    static SlmModel init(SlmConfig config, Vocabulary vocab, ConceptVocab concepts,
                         RelationVocab relations, std::uint64_t seed) {
        config.validate();
        std::mt19937_64 rng(seed);
        SlmModel m;
        m.config = config;
        m.vocab = std::move(vocab);
        m.concepts = std::move(concepts);
        m.relations = std::move(relations);

        int d = config.width;
        int f = config.width * config.ff_multiplier;
        m.seq.embedding = nn::xavier_uniform(m.vocab.size(), d, rng);
        for (int l = 0; l < config.seq_layers; ++l) {
            SeqLayerParams p;
            p.wq = nn::xavier_uniform(d, d, rng);
            p.wk = nn::xavier_uniform(d, d, rng);
            p.wv = nn::xavier_uniform(d, d, rng);
            p.wh = nn::xavier_uniform(d, d, rng);
            p.ln1_gain = Mat::Ones(1, d);
            p.ln1_bias = Mat::Zero(1, d);
            p.ff1 = nn::xavier_uniform(d, f, rng);
            p.ff1_bias = Mat::Zero(1, f);
            p.ff2 = nn::xavier_uniform(f, d, rng);
            p.ff2_bias = Mat::Zero(1, d);
            p.ln2_gain = Mat::Ones(1, d);
            p.ln2_bias = Mat::Zero(1, d);
            m.seq.layers.push_back(std::move(p));
        }

        m.graph.concept_embedding = nn::xavier_uniform(m.concepts.size(), d, rng);
        m.graph.relation_embedding = nn::xavier_uniform(m.relations.size(), d, rng);
        for (int l = 0; l < config.graph_layers; ++l) {
            GraphLayerParams p;
            p.wq = nn::xavier_uniform(d, d, rng);
            p.wk = nn::xavier_uniform(d, d, rng);
            p.wv = nn::xavier_uniform(d, d, rng);
            p.wr = nn::xavier_uniform(d, d, rng);
            m.graph.layers.push_back(std::move(p));
        }

        m.gate.wg = Mat::Zero(d, 1);
        m.gate.bg = Mat::Zero(1, 1);
        m.classifier.wf = Mat::Zero(d, 2);
        m.classifier.bf = Mat::Zero(1, 2);
        return m;
    }

    // Stable, ordered registry used by the optimizer and the checkpoint.
    std::vector<ParamRef> parameters() {
        std::vector<ParamRef> out;
        out.push_back({"seq.embedding", &seq.embedding});
        for (size_t l = 0; l < seq.layers.size(); ++l) {
            auto& p = seq.layers[l];
            std::string base = "seq.layer" + std::to_string(l) + ".";
            out.push_back({base + "wq", &p.wq});
            out.push_back({base + "wk", &p.wk});
            out.push_back({base + "wv", &p.wv});
            out.push_back({base + "wh", &p.wh});
            out.push_back({base + "ln1_gain", &p.ln1_gain});
            out.push_back({base + "ln1_bias", &p.ln1_bias});
            out.push_back({base + "ff1", &p.ff1});
            out.push_back({base + "ff1_bias", &p.ff1_bias});
            out.push_back({base + "ff2", &p.ff2});
            out.push_back({base + "ff2_bias", &p.ff2_bias});
            out.push_back({base + "ln2_gain", &p.ln2_gain});
            out.push_back({base + "ln2_bias", &p.ln2_bias});
        }
        out.push_back({"graph.concept_embedding", &graph.concept_embedding});
        out.push_back({"graph.relation_embedding", &graph.relation_embedding});
        for (size_t l = 0; l < graph.layers.size(); ++l) {
            auto& p = graph.layers[l];
            std::string base = "graph.layer" + std::to_string(l) + ".";
            out.push_back({base + "wq", &p.wq});
            out.push_back({base + "wk", &p.wk});
            out.push_back({base + "wv", &p.wv});
            out.push_back({base + "wr", &p.wr});
        }
        out.push_back({"gate.wg", &gate.wg});
        out.push_back({"gate.bg", &gate.bg});
        out.push_back({"classifier.wf", &classifier.wf});
        out.push_back({"classifier.bf", &classifier.bf});
        return out;
    }
};

// Fixed sinusoidal position table, added to sequence embeddings.
inline Mat positional_encoding(int length, int d) {
    Mat pe = Mat::Zero(length, d);
    for (int pos = 0; pos < length; ++pos) {
        for (int i = 0; i < d / 2; ++i) {
            double rate = std::pow(10000.0, -2.0 * i / d);
            pe(pos, 2 * i) = std::sin(pos * rate);
            pe(pos, 2 * i + 1) = std::cos(pos * rate);
        }
    }
    return pe;
}

}  // namespace dialeval::slm
