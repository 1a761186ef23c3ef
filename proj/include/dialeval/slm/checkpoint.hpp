#pragma once

// Single-file checkpoint container: a JSON manifest (dimensions, vocabularies
// with content hashes, optional training-config snapshot, tensor directory)
// followed by raw little-endian float64 data.
//
//   bytes 0..7   magic "DEVCKPT1"
//   bytes 8..15  manifest length (uint64 LE)
//   manifest     UTF-8 JSON
//   blob         tensors back to back, row-major

#include <cstring>
#include <fstream>
#include <string>

#include "json.hpp"

#include "dialeval/slm/model.hpp"

namespace dialeval::slm {

inline constexpr char kCheckpointMagic[8] = {'D', 'E', 'V', 'C', 'K', 'P', 'T', '1'};

inline void save_checkpoint(SlmModel& model, const std::string& path,
                            const nlohmann::json& training_config = nlohmann::json::object()) {
    nlohmann::json manifest;
    manifest["format"] = "dialeval-checkpoint";
    manifest["version"] = 1;
    manifest["config"] = {{"width", model.config.width},
                          {"seq_layers", model.config.seq_layers},
                          {"seq_heads", model.config.seq_heads},
                          {"ff_multiplier", model.config.ff_multiplier},
                          {"graph_layers", model.config.graph_layers}};
    manifest["vocab"] = {{"words", model.vocab.words()},
                         {"hash", hex64(model.vocab.content_hash())}};
    manifest["concepts"] = {{"labels", model.concepts.labels()},
                            {"hash", hex64(model.concepts.content_hash())}};
    manifest["relations"] = {{"labels", model.relations.labels()},
                             {"hash", hex64(model.relations.content_hash())}};
    manifest["training_config"] = training_config;

    auto params = model.parameters();
    std::uint64_t offset = 0;
    nlohmann::json tensors = nlohmann::json::array();
    for (const auto& p : params) {
        tensors.push_back({{"name", p.name},
                           {"rows", p.tensor->rows()},
                           {"cols", p.tensor->cols()},
                           {"offset", offset}});
        offset += static_cast<std::uint64_t>(p.tensor->size()) * sizeof(double);
    }
    manifest["tensors"] = tensors;

    std::string mtext = manifest.dump();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write checkpoint: " + path);
    out.write(kCheckpointMagic, 8);
    std::uint64_t mlen = mtext.size();
    out.write(reinterpret_cast<const char*>(&mlen), 8);
    out.write(mtext.data(), static_cast<std::streamsize>(mtext.size()));
    for (const auto& p : params) {
        const Mat& m = *p.tensor;
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j) {
                double v = m(i, j);
                out.write(reinterpret_cast<const char*>(&v), sizeof v);
            }
    }
    if (!out) throw IoError("checkpoint write failed: " + path);
}

struct LoadedCheckpoint {
    SlmModel model;
    nlohmann::json manifest;
};

inline LoadedCheckpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open checkpoint: " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kCheckpointMagic, 8) != 0)
        throw IoError("not a checkpoint file: " + path);
    std::uint64_t mlen = 0;
    in.read(reinterpret_cast<char*>(&mlen), 8);
    std::string mtext(mlen, '\0');
    in.read(mtext.data(), static_cast<std::streamsize>(mlen));
    if (!in) throw IoError("truncated checkpoint manifest: " + path);
    nlohmann::json manifest = nlohmann::json::parse(mtext);

    SlmConfig config;
    config.width = manifest["config"]["width"];
    config.seq_layers = manifest["config"]["seq_layers"];
    config.seq_heads = manifest["config"]["seq_heads"];
    config.ff_multiplier = manifest["config"]["ff_multiplier"];
    config.graph_layers = manifest["config"]["graph_layers"];

    Vocabulary vocab = Vocabulary::from_words(manifest["vocab"]["words"]);
    ConceptVocab concepts = ConceptVocab::from_labels(manifest["concepts"]["labels"]);
    RelationVocab relations = RelationVocab::from_labels(manifest["relations"]["labels"]);
    if (hex64(vocab.content_hash()) != manifest["vocab"]["hash"].get<std::string>())
        throw IoError("vocabulary hash mismatch in checkpoint");

    LoadedCheckpoint loaded{
        SlmModel::init(config, std::move(vocab), std::move(concepts), std::move(relations), 0),
        manifest};

    auto params = loaded.model.parameters();
    if (params.size() != manifest["tensors"].size())
        throw IoError("checkpoint tensor count does not match model layout");
    for (size_t k = 0; k < params.size(); ++k) {
        const auto& entry = manifest["tensors"][k];
        if (entry["name"].get<std::string>() != params[k].name)
            throw IoError("checkpoint tensor order mismatch at " + params[k].name);
        Eigen::Index rows = entry["rows"], cols = entry["cols"];
        if (rows != params[k].tensor->rows() || cols != params[k].tensor->cols())
            throw IoError("checkpoint tensor shape mismatch at " + params[k].name);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) {
                double v;
                in.read(reinterpret_cast<char*>(&v), sizeof v);
                (*params[k].tensor)(i, j) = v;
            }
    }
    if (!in) throw IoError("truncated checkpoint data: " + path);
    return loaded;
}

// Warm-start hook: copy the sequence-encoder tensors (embedding and layer
// weights) from another checkpoint into a freshly initialised model. The
// donor must match the target's width, layer count and vocabulary.
inline void load_pretrained_sequence_encoder(SlmModel& model, const std::string& donor_path) {
    LoadedCheckpoint donor = load_checkpoint(donor_path);
    if (donor.model.config.width != model.config.width ||
        donor.model.config.seq_layers != model.config.seq_layers ||
        donor.model.config.seq_heads != model.config.seq_heads ||
        donor.model.config.ff_multiplier != model.config.ff_multiplier)
        throw IoError("pretrained sequence encoder has incompatible dimensions: " + donor_path);
    if (donor.model.vocab.content_hash() != model.vocab.content_hash())
        throw IoError("pretrained sequence encoder was built on a different vocabulary: " +
                      donor_path);
    model.seq = donor.model.seq;
}

}  // namespace dialeval::slm
