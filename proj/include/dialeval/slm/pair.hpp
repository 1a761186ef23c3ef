#pragma once

#include <string>
#include <vector>

#include "dialeval/amr/graph.hpp"

namespace dialeval::slm {

// A context-response pair with its two AMR graphs. Graphs are optional until
// preprocessing has attached them.
struct DialoguePair {
    std::string id;
    std::vector<std::string> context;  // one string per turn
    std::string response;
    amr::AmrGraph context_graph;
    amr::AmrGraph response_graph;
    bool has_graphs = false;
};

}  // namespace dialeval::slm
