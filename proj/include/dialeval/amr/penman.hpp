#pragma once

// PENMAN reader/writer for AMR graphs.
//
// Accepts both the full notation with variables, e.g.
//     (w / want-01 :ARG0 (b / boy))
// and the simplified variable-free form that graph simplifiers emit, e.g.
//     (want :ARG0 (boy))
// Variable names become node ids; nodes written without a variable get a
// generated id ("n0", "n1", ... in encounter order) so parsing is
// deterministic. A bare token in target position is
//   - a re-entrancy reference when it names a variable defined in the text,
//   - a constant when it is a number, a quoted string, '+', '-', or a word
//     that does not look like a variable,
//   - otherwise a dangling re-entrancy reference, which is a parse error.
//
// Serialization walks edges in stored order, one relation per line, indented
// two spaces per depth level. Re-entrant nodes are written in full at first
// occurrence and as a bare id afterwards.

#include <cctype>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dialeval/amr/graph.hpp"
#include "dialeval/common.hpp"

namespace dialeval::amr {

namespace penman_detail {

struct Token {
    enum Type { LParen, RParen, Slash, Atom, String, End } type;
    std::string text;
    int line;
    int column;
};

inline std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> tokens;
    int line = 1, col = 1;
    size_t i = 0;
    auto advance = [&](char c) {
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(c);
            ++i;
            continue;
        }
        if (c == '#') {  // metadata / comment line
            while (i < text.size() && text[i] != '\n') {
                advance(text[i]);
                ++i;
            }
            continue;
        }
        int tline = line, tcol = col;
        if (c == '(') {
            tokens.push_back({Token::LParen, "(", tline, tcol});
            advance(c);
            ++i;
        } else if (c == ')') {
            tokens.push_back({Token::RParen, ")", tline, tcol});
            advance(c);
            ++i;
        } else if (c == '/') {
            tokens.push_back({Token::Slash, "/", tline, tcol});
            advance(c);
            ++i;
        } else if (c == '"') {
            std::string s = "\"";
            advance(c);
            ++i;
            bool closed = false;
            while (i < text.size()) {
                char d = text[i];
                s.push_back(d);
                advance(d);
                ++i;
                if (d == '\\' && i < text.size()) {
                    s.push_back(text[i]);
                    advance(text[i]);
                    ++i;
                    continue;
                }
                if (d == '"') {
                    closed = true;
                    break;
                }
            }
            if (!closed) throw ParseError("unterminated string literal", tline, tcol);
            tokens.push_back({Token::String, s, tline, tcol});
        } else {
            std::string s;
            while (i < text.size()) {
                char d = text[i];
                if (d == ' ' || d == '\t' || d == '\r' || d == '\n' || d == '(' || d == ')' ||
                    d == '/' || d == '"')
                    break;
                s.push_back(d);
                advance(d);
                ++i;
            }
            tokens.push_back({Token::Atom, s, tline, tcol});
        }
    }
    int endl = line, endc = col;
    tokens.push_back({Token::End, "", endl, endc});
    return tokens;
}

// Raw syntax tree, before ids are assigned and references resolved.
struct SyntaxNode {
    std::optional<std::string> variable;  // set for "(var / concept ...)"
    std::string concept_token;            // concept label or bare-node label
    int line = 0, column = 0;
    struct Child {
        std::string relation;
        int line, column;
        // exactly one of the two below
        std::unique_ptr<SyntaxNode> node;
        std::optional<Token> atom;  // bare target (atom or string)
    };
    std::vector<Child> children;
};

class Parser {
   public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    std::unique_ptr<SyntaxNode> parse_graph() {
        auto root = parse_node();
        const Token& t = peek();
        if (t.type != Token::End) {
            if (t.type == Token::RParen)
                throw ParseError("unbalanced parentheses: unexpected ')'", t.line, t.column);
            throw ParseError("unexpected trailing content after graph", t.line, t.column);
        }
        return root;
    }

   private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& next() { return tokens_[pos_++]; }

    std::unique_ptr<SyntaxNode> parse_node() {
        const Token& open = next();
        if (open.type != Token::LParen)
            throw ParseError("expected '('", open.line, open.column);
        auto node = std::make_unique<SyntaxNode>();
        node->line = open.line;
        node->column = open.column;

        const Token& head = next();
        if (head.type == Token::End)
            throw ParseError("unbalanced parentheses: unexpected end of input", head.line,
                             head.column);
        if (head.type != Token::Atom || head.text.empty() || head.text[0] == ':')
            throw ParseError("expected variable or concept after '('", head.line, head.column);

        if (peek().type == Token::Slash) {
            next();  // consume '/'
            const Token& concept_tok = next();
            if (concept_tok.type != Token::Atom && concept_tok.type != Token::String)
                throw ParseError("expected concept after '/'", concept_tok.line,
                                 concept_tok.column);
            node->variable = head.text;
            node->concept_token = concept_tok.text;
        } else {
            node->concept_token = head.text;
        }

        while (true) {
            const Token& t = peek();
            if (t.type == Token::RParen) {
                next();
                return node;
            }
            if (t.type == Token::End)
                throw ParseError("unbalanced parentheses: unexpected end of input", t.line,
                                 t.column);
            if (t.type == Token::LParen)
                throw ParseError("missing relation label before '('", t.line, t.column);
            if (t.type != Token::Atom || t.text.empty() || t.text[0] != ':')
                throw ParseError("expected relation label starting with ':'", t.line, t.column);

            SyntaxNode::Child child;
            child.relation = t.text;
            child.line = t.line;
            child.column = t.column;
            next();

            const Token& target = peek();
            if (target.type == Token::LParen) {
                child.node = parse_node();
            } else if (target.type == Token::Atom || target.type == Token::String) {
                if (target.type == Token::Atom && !target.text.empty() && target.text[0] == ':')
                    throw ParseError("missing target for relation " + child.relation, target.line,
                                     target.column);
                child.atom = target;
                next();
            } else {
                throw ParseError("missing target for relation " + child.relation, target.line,
                                 target.column);
            }
            node->children.push_back(std::move(child));
        }
    }

    std::vector<Token> tokens_;
    size_t pos_ = 0;
};

inline bool looks_like_variable(const std::string& s) {
    if (s.empty() || s.size() > 4) return false;
    size_t i = 0;
    if (!std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    ++i;
    if (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) ++i;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

inline bool is_numeric(const std::string& s) {
    if (s.empty()) return false;
    size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
    if (i == s.size()) return false;
    bool digit = false, dot = false;
    for (; i < s.size(); ++i) {
        if (std::isdigit(static_cast<unsigned char>(s[i]))) {
            digit = true;
        } else if (s[i] == '.' && !dot) {
            dot = true;
        } else {
            return false;
        }
    }
    return digit;
}

inline void collect_variables(const SyntaxNode& node,
                              std::unordered_map<std::string, int>& defs) {
    if (node.variable) ++defs[*node.variable];
    for (const auto& c : node.children)
        if (c.node) collect_variables(*c.node, defs);
}

class GraphBuilder {
   public:
    GraphBuilder(const SyntaxNode& root, AmrGraph& out) : out_(out) {
        collect_variables(root, variable_defs_);
        for (const auto& [var, count] : variable_defs_)
            if (count > 1)
                throw ParseError("duplicate definition of variable '" + var + "'", root.line,
                                 root.column);
        out_.root = build(root);
    }

   private:
    std::string fresh_id() {
        while (true) {
            std::string id = "n" + std::to_string(counter_++);
            if (!variable_defs_.count(id) && !out_.has_node(id)) return id;
        }
    }

    std::string create_node(const SyntaxNode& node) {
        if (node.variable) {
            out_.add_node({*node.variable, node.concept_token, NodeKind::Variable});
            return *node.variable;
        }
        std::string id = fresh_id();
        out_.add_node({id, node.concept_token, NodeKind::Anonymous});
        return id;
    }

    // Nodes and edges are recorded in document order so that serialization
    // reproduces the input layout.
    std::string build(const SyntaxNode& node) {
        std::string id = create_node(node);
        link_children(node, id);
        return id;
    }

    void link_children(const SyntaxNode& node, const std::string& id) {
        for (const auto& c : node.children) {
            if (c.node) {
                std::string child_id = create_node(*c.node);
                out_.add_edge(id, c.relation, child_id);
                link_children(*c.node, child_id);
            } else {
                const Token& atom = *c.atom;
                if (atom.type == Token::Atom && variable_defs_.count(atom.text)) {
                    // re-entrancy; node may be defined later in the text
                    out_.add_edge(id, c.relation, atom.text);
                } else if (atom.type == Token::String || is_numeric(atom.text) ||
                           atom.text == "-" || atom.text == "+" ||
                           !looks_like_variable(atom.text)) {
                    std::string cid = fresh_id();
                    out_.add_node({cid, atom.text, NodeKind::Constant});
                    out_.add_edge(id, c.relation, cid);
                } else {
                    throw ParseError("dangling re-entrancy reference '" + atom.text + "'",
                                     atom.line, atom.column);
                }
            }
        }
    }

    AmrGraph& out_;
    std::unordered_map<std::string, int> variable_defs_;
    int counter_ = 0;
};

}  // namespace penman_detail

inline AmrGraph parse_penman(const std::string& text) {
    auto tokens = penman_detail::tokenize(text);
    if (tokens.size() == 1)  // only End
        throw ParseError("empty input", 1, 1);
    penman_detail::Parser parser(std::move(tokens));
    auto tree = parser.parse_graph();
    AmrGraph g;
    penman_detail::GraphBuilder builder(*tree, g);
    return g;
}

// Splits a corpus on blank lines and parses each block. '#' lines are
// comments and do not separate blocks.
inline std::vector<AmrGraph> parse_penman_corpus(const std::string& text) {
    std::vector<AmrGraph> graphs;
    std::string block;
    auto has_content = [](const std::string& b) {
        for (const auto& line : split_lines(b)) {
            std::string t = trim(line);
            if (!t.empty() && t[0] != '#') return true;
        }
        return false;
    };
    auto flush = [&]() {
        if (has_content(block)) graphs.push_back(parse_penman(block));
        block.clear();
    };
    for (const auto& line : split_lines(text)) {
        if (trim(line).empty()) {
            flush();
        } else {
            block += line;
            block += '\n';
        }
    }
    flush();
    return graphs;
}

namespace penman_detail {

class Serializer {
   public:
    explicit Serializer(const AmrGraph& g) : g_(g) {
        refcount_[g.root] += 1;
        for (const auto& e : g.edges) refcount_[e.target] += 1;
    }

    std::string run() {
        std::string out;
        emit_node(g_.root, 0, out);
        if (emitted_.size() != g_.nodes.size())
            throw SerializationError(
                "graph has nodes unreachable from the root; not expressible in PENMAN");
        return out;
    }

   private:
    bool needs_variable(const AmrNode& n) const {
        if (n.kind == NodeKind::Variable) return true;
        return refcount_.at(n.id) > 1;  // re-entrant targets must carry an id
    }

    void emit_node(const std::string& id, int depth, std::string& out) {
        const AmrNode* n = g_.find_node(id);
        if (!n) throw SerializationError("edge references unknown node id: " + id);
        if (emitted_.count(id)) {
            out += id;  // re-entrancy reference
            return;
        }
        emitted_.insert(id);

        auto children = g_.out_edges(id);
        if (n->kind == NodeKind::Constant && children.empty() && refcount_.at(id) == 1) {
            out += n->label;
            return;
        }

        out += '(';
        if (needs_variable(*n)) {
            out += id;
            out += " / ";
        }
        out += n->label;
        for (const auto* e : children) {
            out += '\n';
            out.append(2 * (depth + 1), ' ');
            out += e->relation;
            out += ' ';
            emit_node(e->target, depth + 1, out);
        }
        out += ')';
    }

    const AmrGraph& g_;
    std::unordered_map<std::string, int> refcount_;
    std::unordered_set<std::string> emitted_;
};

}  // namespace penman_detail

inline std::string serialize_penman(const AmrGraph& g) {
    penman_detail::Serializer s(g);
    return s.run();
}

}  // namespace dialeval::amr
