#pragma once

// AMR graph data model: concept nodes, relation-labeled edges, a designated
// root. Graphs are plain values; all operations on them are pure functions.

#include <algorithm>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dialeval/common.hpp"

namespace dialeval::amr {

// How a node is written back out:
//   Variable  -> "(id / label ...)", may be referenced again by bare id
//   Anonymous -> "(label ...)", id exists only in memory
//   Constant  -> bare token (numbers, quoted strings, "-"), always a leaf
enum class NodeKind { Variable, Anonymous, Constant };

struct AmrNode {
    std::string id;
    std::string label;  // the AMR concept, e.g. "recommend-01"
    NodeKind kind = NodeKind::Anonymous;
};

struct AmrEdge {
    std::string source;
    std::string relation;  // includes the leading ':', e.g. ":ARG0"
    std::string target;

    bool operator==(const AmrEdge& o) const {
        return source == o.source && relation == o.relation && target == o.target;
    }
};

struct AmrGraph {
    std::vector<AmrNode> nodes;  // insertion order, ids unique
    std::vector<AmrEdge> edges;  // ordered; serialization follows this order
    std::string root;

    const AmrNode* find_node(const std::string& id) const {
        for (const auto& n : nodes)
            if (n.id == id) return &n;
        return nullptr;
    }

    AmrNode* find_node(const std::string& id) {
        for (auto& n : nodes)
            if (n.id == id) return &n;
        return nullptr;
    }

    bool has_node(const std::string& id) const { return find_node(id) != nullptr; }

    void add_node(AmrNode n) {
        if (has_node(n.id)) throw std::invalid_argument("duplicate node id: " + n.id);
        nodes.push_back(std::move(n));
    }

    void add_edge(std::string source, std::string relation, std::string target) {
        edges.push_back({std::move(source), std::move(relation), std::move(target)});
    }

    std::vector<const AmrEdge*> out_edges(const std::string& id) const {
        std::vector<const AmrEdge*> out;
        for (const auto& e : edges)
            if (e.source == id) out.push_back(&e);
        return out;
    }
};

enum class Severity { Warning, Error };

struct ValidationIssue {
    Severity severity;
    std::string message;
    std::string location;  // node id, edge triple, or "graph"
};

struct ValidationReport {
    bool ok = true;
    std::vector<ValidationIssue> issues;

    void add(Severity sev, std::string message, std::string location) {
        if (sev == Severity::Error) ok = false;
        issues.push_back({sev, std::move(message), std::move(location)});
    }

    size_t error_count() const {
        size_t n = 0;
        for (const auto& i : issues)
            if (i.severity == Severity::Error) ++n;
        return n;
    }
};

// Checks every structural invariant; problems are reported, never thrown.
inline ValidationReport validate_graph(const AmrGraph& g) {
    ValidationReport report;
    if (g.nodes.empty()) {
        report.add(Severity::Error, "graph has no nodes", "graph");
        return report;
    }

    std::unordered_map<std::string, const AmrNode*> by_id;
    for (const auto& n : g.nodes) {
        if (by_id.count(n.id))
            report.add(Severity::Error, "duplicate node id", n.id);
        else
            by_id[n.id] = &n;
        if (n.label.empty()) report.add(Severity::Error, "empty concept label", n.id);
    }

    if (!by_id.count(g.root))
        report.add(Severity::Error, "root id not present among nodes", g.root.empty() ? "graph" : g.root);

    std::unordered_set<std::string> seen_triples;
    for (const auto& e : g.edges) {
        std::string loc = e.source + " " + e.relation + " " + e.target;
        if (e.relation.empty() || e.relation[0] != ':')
            report.add(Severity::Error, "relation label must begin with ':'", loc);
        if (!by_id.count(e.source)) report.add(Severity::Error, "edge source is not a node", loc);
        if (!by_id.count(e.target)) report.add(Severity::Error, "edge target is not a node", loc);
        std::string key = e.source + "\x1f" + e.relation + "\x1f" + e.target;
        if (!seen_triples.insert(key).second)
            report.add(Severity::Error, "duplicate (source, relation, target) triple", loc);
        if (by_id.count(e.source) && by_id.at(e.source)->kind == NodeKind::Constant)
            report.add(Severity::Error, "constant node cannot have outgoing edges", loc);
    }

    // Directed reachability from the root.
    if (by_id.count(g.root)) {
        std::unordered_set<std::string> reached;
        std::vector<std::string> stack{g.root};
        reached.insert(g.root);
        while (!stack.empty()) {
            std::string cur = stack.back();
            stack.pop_back();
            for (const auto& e : g.edges) {
                if (e.source == cur && by_id.count(e.target) && reached.insert(e.target).second)
                    stack.push_back(e.target);
            }
        }
        for (const auto& n : g.nodes)
            if (!reached.count(n.id))
                report.add(Severity::Error, "unreachable node", n.id);
    }

    return report;
}

namespace detail {

// Order-sensitive DFS matching from the roots, building an id bijection as it
// goes. Ids themselves are not compared, so graphs whose anonymous ids were
// regenerated (or uniquified during a merge) still compare equal.
inline bool match_nodes(const AmrGraph& a, const AmrGraph& b, const std::string& ida,
                        const std::string& idb, std::unordered_map<std::string, std::string>& fwd,
                        std::unordered_map<std::string, std::string>& rev) {
    auto itf = fwd.find(ida);
    auto itr = rev.find(idb);
    if (itf != fwd.end() || itr != rev.end())
        return itf != fwd.end() && itr != rev.end() && itf->second == idb && itr->second == ida;

    const AmrNode* na = a.find_node(ida);
    const AmrNode* nb = b.find_node(idb);
    if (!na || !nb) return false;
    if (na->label != nb->label) return false;
    // Variable vs Anonymous is a spelling detail (ids are regenerated on
    // parse); a Constant is a different syntactic object.
    if ((na->kind == NodeKind::Constant) != (nb->kind == NodeKind::Constant)) return false;

    fwd[ida] = idb;
    rev[idb] = ida;

    auto ea = a.out_edges(ida);
    auto eb = b.out_edges(idb);
    if (ea.size() != eb.size()) return false;
    for (size_t i = 0; i < ea.size(); ++i) {
        if (ea[i]->relation != eb[i]->relation) return false;
        if (!match_nodes(a, b, ea[i]->target, eb[i]->target, fwd, rev)) return false;
    }
    return true;
}

}  // namespace detail

// Structural equality: same shape, labels, relations and edge order, root to
// root, modulo a consistent renaming of node ids.
inline bool structurally_equal(const AmrGraph& a, const AmrGraph& b) {
    if (a.nodes.size() != b.nodes.size() || a.edges.size() != b.edges.size()) return false;
    std::unordered_map<std::string, std::string> fwd, rev;
    if (!detail::match_nodes(a, b, a.root, b.root, fwd, rev)) return false;
    return fwd.size() == a.nodes.size();
}

}  // namespace dialeval::amr
