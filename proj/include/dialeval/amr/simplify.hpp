#pragma once

// Graph simplification pass. Exactly two transformations:
//   1. concepts lose trailing sense suffixes ("-" + two digits), applied
//      repeatedly so the pass is idempotent ("want-01" -> "want"),
//   2. ":wiki" edges are dropped together with their target when the target
//      is a leaf with no other incident edges.
// Everything else (ids, edge order, re-entrancies) is preserved.

#include <cctype>
#include <string>
#include <unordered_set>

#include "dialeval/amr/graph.hpp"

namespace dialeval::amr {

inline std::string strip_sense_suffix(std::string label) {
    auto has_suffix = [](const std::string& s) {
        return s.size() > 3 && s[s.size() - 3] == '-' &&
               std::isdigit(static_cast<unsigned char>(s[s.size() - 2])) &&
               std::isdigit(static_cast<unsigned char>(s[s.size() - 1]));
    };
    while (has_suffix(label)) label.resize(label.size() - 3);
    return label;
}

inline AmrGraph simplify_graph(const AmrGraph& g) {
    AmrGraph out;
    out.root = g.root;

    std::unordered_set<std::string> dropped_nodes;
    std::vector<AmrEdge> kept_edges;
    for (const auto& e : g.edges) {
        if (e.relation != ":wiki") {
            kept_edges.push_back(e);
            continue;
        }
        // Drop the target too when nothing else touches it.
        bool target_leaf = true;
        int incident = 0;
        for (const auto& o : g.edges) {
            if (o.source == e.target) target_leaf = false;
            if (o.target == e.target) ++incident;
        }
        if (target_leaf && incident == 1 && e.target != g.root)
            dropped_nodes.insert(e.target);
        else if (!target_leaf)
            kept_edges.push_back(e);  // removing the edge would orphan a subtree
    }

    for (const auto& n : g.nodes) {
        if (dropped_nodes.count(n.id)) continue;
        AmrNode copy = n;
        if (copy.kind != NodeKind::Constant) {
            std::string stripped = strip_sense_suffix(copy.label);
            if (!stripped.empty()) copy.label = stripped;
        }
        out.nodes.push_back(std::move(copy));
    }
    for (auto& e : kept_edges)
        if (!dropped_nodes.count(e.target)) out.edges.push_back(std::move(e));

    return out;
}

}  // namespace dialeval::amr
