#pragma once

// Attention map export for heatmap plotting: one labeled matrix per encoder,
// layer and head, written as tab-separated text.

#include <filesystem>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "dialeval/slm/scorer.hpp"

namespace dialeval::slm {

struct AttentionMap {
    std::string encoder;  // "sequence" or "graph"
    int layer = 0;
    int head = 0;
    std::vector<std::string> labels;  // row and column labels (self-attention)
    nn::Mat values;
};

struct AttentionBundle {
    std::vector<AttentionMap> maps;
};

inline AttentionBundle export_attention_maps(SlmModel& model, const DialoguePair& pair,
                                             const ForwardOptions& options = {}) {
    Tape tape;
    TapeModel tm = TapeModel::load(tape, model);
    PairForward fwd = forward_pair(tape, tm, model, pair, options);

    AttentionBundle bundle;
    if (fwd.seq) {
        for (size_t l = 0; l < fwd.seq->attention.size(); ++l)
            for (size_t h = 0; h < fwd.seq->attention[l].size(); ++h)
                bundle.maps.push_back({"sequence", static_cast<int>(l), static_cast<int>(h),
                                       fwd.seq->labels, fwd.seq->attention[l][h]});
    }
    if (fwd.graph) {
        for (size_t l = 0; l < fwd.graph->attention.size(); ++l)
            for (size_t h = 0; h < fwd.graph->attention[l].size(); ++h)
                bundle.maps.push_back({"graph", static_cast<int>(l), static_cast<int>(h),
                                       fwd.graph->labels, fwd.graph->attention[l][h]});
    }
    return bundle;
}

inline std::string render_attention_map(const AttentionMap& map) {
    std::ostringstream out;
    out << std::setprecision(17);
    for (const auto& label : map.labels) out << '\t' << label;
    out << '\n';
    for (Eigen::Index i = 0; i < map.values.rows(); ++i) {
        out << map.labels[static_cast<size_t>(i)];
        for (Eigen::Index j = 0; j < map.values.cols(); ++j) out << '\t' << map.values(i, j);
        out << '\n';
    }
    return out.str();
}

// One file per encoder/layer/head: attn_<encoder>_L<layer>_H<head>.tsv
inline std::vector<std::string> write_attention_bundle(const AttentionBundle& bundle,
                                                       const std::string& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> written;
    for (const auto& map : bundle.maps) {
        std::string name = "attn_" + map.encoder + "_L" + std::to_string(map.layer) + "_H" +
                           std::to_string(map.head) + ".tsv";
        std::string path = dir + "/" + name;
        write_file(path, render_attention_map(map));
        written.push_back(path);
    }
    return written;
}

}  // namespace dialeval::slm
