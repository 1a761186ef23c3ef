#pragma once

#include <array>
#include <string>

#include "dialeval/common.hpp"

namespace dialeval::judge {

enum class Criterion { Naturalness, Coherence, Engagingness, Groundedness };

inline constexpr std::array<Criterion, 4> kAllCriteria = {
    Criterion::Naturalness, Criterion::Coherence, Criterion::Engagingness,
    Criterion::Groundedness};

inline const std::string& criterion_name(Criterion c) {
    static const std::string names[] = {"Naturalness", "Coherence", "Engagingness",
                                        "Groundedness"};
    return names[static_cast<int>(c)];
}

// The verbatim question line each prompt asks.
inline const std::string& criterion_question(Criterion c) {
    static const std::string questions[] = {
        "To what extent the response is naturally written (on a scale of 1-5, with 1 being "
        "the lowest)",
        "To what extent the response is well-structured, logical, and meaningful (on a scale "
        "of 1-5, with 1 being the lowest)",
        "How dull/interest is the text of the dialogue response? (on a scale of 1-5, with 1 "
        "being the lowest)",
        "To what extent the response is grounded in facts present in the context (on a scale "
        "of 1-5, with 1 being the lowest)"};
    return questions[static_cast<int>(c)];
}

inline Criterion criterion_from_name(const std::string& name) {
    for (Criterion c : kAllCriteria)
        if (lowercase(name) == lowercase(criterion_name(c))) return c;
    throw ConfigError("unknown criterion: " + name);
}

}  // namespace dialeval::judge
