#pragma once

// Joins sentence graphs into one multi-sentence graph: a synthesized
// "multi-sentence" root with ":snt1".."":sntK" edges to each sentence root.
// An input whose root is already "multi-sentence" contributes its sentence
// subgraphs rather than being wrapped a second time; its old wrapper root is
// discarded. Node ids are uniquified on collision by suffixing.

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dialeval/amr/graph.hpp"

namespace dialeval::amr {

inline constexpr const char* kMultiSentenceLabel = "multi-sentence";

// Number of sentences a graph contributes when merged.
inline int sentence_count(const AmrGraph& g) {
    const AmrNode* root = g.find_node(g.root);
    if (root && root->label == kMultiSentenceLabel) {
        int k = 0;
        for (const auto& e : g.edges)
            if (e.source == g.root && e.relation.rfind(":snt", 0) == 0) ++k;
        if (k > 0) return k;
    }
    return 1;
}

namespace merge_detail {

// Copies src into dst, renaming ids that collide. Returns old-id -> new-id.
inline std::unordered_map<std::string, std::string> copy_into(
    const AmrGraph& src, AmrGraph& dst, const std::unordered_set<std::string>& skip_nodes) {
    std::unordered_map<std::string, std::string> rename;
    for (const auto& n : src.nodes) {
        if (skip_nodes.count(n.id)) continue;
        std::string id = n.id;
        int suffix = 2;
        while (dst.has_node(id)) id = n.id + "_" + std::to_string(suffix++);
        rename[n.id] = id;
        dst.add_node({id, n.label, n.kind});
    }
    for (const auto& e : src.edges) {
        if (skip_nodes.count(e.source) || skip_nodes.count(e.target)) continue;
        dst.add_edge(rename.at(e.source), e.relation, rename.at(e.target));
    }
    return rename;
}

}  // namespace merge_detail

inline AmrGraph merge_sentence_graphs(const std::vector<AmrGraph>& sentence_graphs) {
    if (sentence_graphs.empty())
        throw std::invalid_argument("merge requires at least one sentence graph");

    AmrGraph out;
    std::string root_id = "ms";
    out.add_node({root_id, kMultiSentenceLabel, NodeKind::Anonymous});
    out.root = root_id;

    int snt = 0;
    for (const auto& g : sentence_graphs) {
        const AmrNode* groot = g.find_node(g.root);
        bool pre_merged = groot && groot->label == kMultiSentenceLabel && sentence_count(g) > 1;
        if (pre_merged) {
            auto rename = merge_detail::copy_into(g, out, {g.root});
            for (const auto& e : g.edges) {
                if (e.source != g.root) continue;
                if (e.relation.rfind(":snt", 0) == 0)
                    out.add_edge(root_id, ":snt" + std::to_string(++snt), rename.at(e.target));
                else  // stray non-sentence edge hanging off the old wrapper
                    out.add_edge(root_id, e.relation, rename.at(e.target));
            }
        } else {
            auto rename = merge_detail::copy_into(g, out, {});
            out.add_edge(root_id, ":snt" + std::to_string(++snt), rename.at(g.root));
        }
    }
    return out;
}

inline AmrGraph merge_context_response_graphs(const AmrGraph& g_c, const AmrGraph& g_r) {
    return merge_sentence_graphs({g_c, g_r});
}

}  // namespace dialeval::amr
