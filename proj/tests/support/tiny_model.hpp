#pragma once

// Small model + pair builders shared by the slm tests.

#include <string>
#include <vector>

#include "dialeval/amr/penman.hpp"
#include "dialeval/slm/model.hpp"
#include "dialeval/slm/pair.hpp"

namespace dialeval::testing {

inline slm::SlmModel tiny_model(std::uint64_t seed = 1, int width = 8, int layers = 2,
                                int heads = 2) {
    slm::SlmConfig config;
    config.width = width;
    config.seq_layers = layers;
    config.seq_heads = heads;
    config.ff_multiplier = 2;
    config.graph_layers = layers;

    slm::Vocabulary vocab = slm::Vocabulary::build(
        {"what about the canyon is it worth it", "yes the canyon is really worth it",
         "the movie was really good it was worth watching it", "do you like the garden"});
    slm::ConceptVocab concepts;
    slm::RelationVocab relations;
    for (const char* text :
         {"(worth :polarity (amr-unk) :ARG1 (canyon))", "(worth :ARG1 (canyon) :degree (really))",
          "(worth :ARG1 (movie) :mod (canyon))", "(recommend :ARG0 (you) :ARG1 (place))"}) {
        amr::AmrGraph g = amr::parse_penman(text);
        concepts.add_graph(g);
        relations.add_graph(g);
    }
    concepts.add("multi-sentence");
    return slm::SlmModel::init(config, vocab, concepts, relations, seed);
}

inline slm::DialoguePair tiny_pair(const std::string& id = "p0") {
    slm::DialoguePair pair;
    pair.id = id;
    pair.context = {"what about the canyon", "is it worth it"};
    pair.response = "yes the canyon is really worth it";
    pair.context_graph = amr::parse_penman("(worth :polarity (amr-unk) :ARG1 (canyon))");
    pair.response_graph = amr::parse_penman("(worth :ARG1 (canyon) :degree (really))");
    pair.has_graphs = true;
    return pair;
}

}  // namespace dialeval::testing
