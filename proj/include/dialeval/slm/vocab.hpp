#pragma once

// Whitespace + lowercase tokenizer with corpus-built vocabularies. Token,
// concept and relation vocabularies are separate; each reserves its own
// special entries at fixed ids.

#include <string>
#include <unordered_map>
#include <vector>

#include "dialeval/amr/graph.hpp"
#include "dialeval/common.hpp"

namespace dialeval::slm {

inline std::vector<std::string> tokenize(const std::string& text) {
    return split_ws(lowercase(text));
}

class Vocabulary {
   public:
    static constexpr int kPad = 0;
    static constexpr int kSep = 1;
    static constexpr int kUnk = 2;
    static constexpr int kTurn = 3;

    Vocabulary() {
        for (const char* w : {"<pad>", "<sep>", "<unk>", "<turn>"}) add(w);
    }

    int add(const std::string& word) {
        auto it = index_.find(word);
        if (it != index_.end()) return it->second;
        int id = static_cast<int>(words_.size());
        words_.push_back(word);
        index_[word] = id;
        return id;
    }

    int id(const std::string& word) const {
        auto it = index_.find(word);
        return it == index_.end() ? kUnk : it->second;
    }

    const std::string& word(int id) const { return words_.at(static_cast<size_t>(id)); }
    int size() const { return static_cast<int>(words_.size()); }
    const std::vector<std::string>& words() const { return words_; }

    std::uint64_t content_hash() const {
        std::string joined;
        for (const auto& w : words_) {
            joined += w;
            joined += '\n';
        }
        return fnv1a64(joined);
    }

    static Vocabulary build(const std::vector<std::string>& texts) {
        Vocabulary v;
        for (const auto& t : texts)
            for (const auto& tok : tokenize(t)) v.add(tok);
        return v;
    }

    static Vocabulary from_words(const std::vector<std::string>& words) {
        Vocabulary v;
        for (const auto& w : words) v.add(w);
        return v;
    }

   private:
    std::vector<std::string> words_;
    std::unordered_map<std::string, int> index_;
};

class ConceptVocab {
   public:
    static constexpr int kUnk = 0;

    ConceptVocab() { add("<unk>"); }

    int add(const std::string& concept_label) {
        auto it = index_.find(concept_label);
        if (it != index_.end()) return it->second;
        int id = static_cast<int>(labels_.size());
        labels_.push_back(concept_label);
        index_[concept_label] = id;
        return id;
    }

    int id(const std::string& concept_label) const {
        auto it = index_.find(concept_label);
        return it == index_.end() ? kUnk : it->second;
    }

    int size() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }

    std::uint64_t content_hash() const {
        std::string joined;
        for (const auto& w : labels_) {
            joined += w;
            joined += '\n';
        }
        return fnv1a64(joined);
    }

    void add_graph(const amr::AmrGraph& g) {
        for (const auto& n : g.nodes) add(n.label);
    }

    static ConceptVocab from_labels(const std::vector<std::string>& labels) {
        ConceptVocab v;
        for (const auto& l : labels) v.add(l);
        return v;
    }

   private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, int> index_;
};

// Relation table; SELF and NO-EDGE are reserved for the graph attention.
class RelationVocab {
   public:
    static constexpr int kSelf = 0;
    static constexpr int kNoEdge = 1;
    static constexpr int kUnk = 2;

    RelationVocab() {
        for (const char* w : {"<self>", "<no-edge>", "<unk>"}) add(w);
    }

    int add(const std::string& relation) {
        auto it = index_.find(relation);
        if (it != index_.end()) return it->second;
        int id = static_cast<int>(labels_.size());
        labels_.push_back(relation);
        index_[relation] = id;
        return id;
    }

    int id(const std::string& relation) const {
        auto it = index_.find(relation);
        return it == index_.end() ? kUnk : it->second;
    }

    int size() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }

    std::uint64_t content_hash() const {
        std::string joined;
        for (const auto& w : labels_) {
            joined += w;
            joined += '\n';
        }
        return fnv1a64(joined);
    }

    void add_graph(const amr::AmrGraph& g) {
        for (const auto& e : g.edges) add(e.relation);
    }

    static RelationVocab from_labels(const std::vector<std::string>& labels) {
        RelationVocab v;
        for (const auto& l : labels) v.add(l);
        return v;
    }

   private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, int> index_;
};

// [context tokens, <sep>, response tokens]; multi-turn contexts are joined
// with <turn>. pad_to extends with <pad> entries marked invalid.
struct TokenSequence {
    std::vector<int> ids;
    std::vector<bool> valid;
    int context_len = 0;   // includes <turn> separators
    int response_len = 0;

    int active_length() const { return context_len + response_len + 1; }
};

inline TokenSequence build_token_sequence(const Vocabulary& vocab,
                                          const std::vector<std::string>& context_utterances,
                                          const std::string& response, int pad_to = 0) {
    TokenSequence seq;
    bool first = true;
    for (const auto& utt : context_utterances) {
        if (!first) {
            seq.ids.push_back(Vocabulary::kTurn);
            ++seq.context_len;
        }
        first = false;
        for (const auto& tok : tokenize(utt)) {
            seq.ids.push_back(vocab.id(tok));
            ++seq.context_len;
        }
    }
    seq.ids.push_back(Vocabulary::kSep);
    for (const auto& tok : tokenize(response)) {
        seq.ids.push_back(vocab.id(tok));
        ++seq.response_len;
    }
    seq.valid.assign(seq.ids.size(), true);
    while (static_cast<int>(seq.ids.size()) < pad_to) {
        seq.ids.push_back(Vocabulary::kPad);
        seq.valid.push_back(false);
    }
    return seq;
}

}  // namespace dialeval::slm
