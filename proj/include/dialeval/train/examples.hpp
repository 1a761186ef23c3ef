#pragma once

#include <string>
#include <vector>

#include "dialeval/slm/pair.hpp"

namespace dialeval::train {

enum class NegativeKind { None, Random, Adversarial };

// label 1 <=> negative_kind None
struct TrainingExample {
    slm::DialoguePair pair;
    int label = 1;
    NegativeKind negative_kind = NegativeKind::None;

    static TrainingExample positive(slm::DialoguePair pair) { return {std::move(pair), 1, NegativeKind::None}; }
    static TrainingExample negative(slm::DialoguePair pair, NegativeKind kind) {
        return {std::move(pair), 0, kind};
    }
};

inline const char* negative_kind_name(NegativeKind k) {
    switch (k) {
        case NegativeKind::None: return "none";
        case NegativeKind::Random: return "random";
        case NegativeKind::Adversarial: return "adversarial";
    }
    return "?";
}

}  // namespace dialeval::train
