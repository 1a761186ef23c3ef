#pragma once

// Criterion prompt construction. The rendered prompt carries the instruction
// block, the criterion question, the Input block (conversation context,
// response, serialized AMR graph, SLM score with two decimals) and the
// "Evaluation Form (Score ONLY):" footer naming the criterion.

#include <string>
#include <vector>

#include "dialeval/judge/criteria.hpp"
#include "dialeval/slm/scorer.hpp"

namespace dialeval::judge {

struct JudgePrompt {
    Criterion criterion;
    std::string rendered_text;
};

// The template with {placeholders}; also stored as golden fixtures.
inline std::string prompt_template(Criterion c) {
    return "Rate the dialogue response.\n"
           "\n"
           "Use the prediction probability from the SLMs and AMR graphs of the conversation "
           "pair to aid your judgment.\n"
           "\n"
           "Note: Please take the time to fully read and understand the dialogue response.\n"
           "\n" +
           criterion_question(c) +
           "\n"
           "\n"
           "Input:\n"
           "Conversation Context: {context}\n"
           "\n"
           "Response: {response}\n"
           "\n"
           "AMR Graph:\n"
           "{amr_graph}\n"
           "\n"
           "SLM score: {slm_score}\n"
           "\n"
           "Evaluation Form (Score ONLY):\n" +
           criterion_name(c) + ": \n";
}

namespace prompt_detail {
inline void substitute(std::string& text, const std::string& key, const std::string& value) {
    size_t at = text.find(key);
    if (at == std::string::npos) throw TemplateError("template placeholder missing: " + key);
    text.replace(at, key.size(), value);
}
}  // namespace prompt_detail

inline JudgePrompt build_prompt(Criterion criterion, const std::string& context,
                                const std::string& response, const std::string& amr_text,
                                double slm_score) {
    if (context.empty()) throw TemplateError("empty conversation context");
    if (response.empty()) throw TemplateError("empty response");
    if (amr_text.empty()) throw TemplateError("empty AMR graph text");
    if (slm_score < 0.0 || slm_score > 1.0)
        throw TemplateError("SLM score outside [0,1]: " + std::to_string(slm_score));

    std::string text = prompt_template(criterion);
    prompt_detail::substitute(text, "{context}", context);
    prompt_detail::substitute(text, "{response}", response);
    prompt_detail::substitute(text, "{amr_graph}", amr_text);
    prompt_detail::substitute(text, "{slm_score}", slm::format_slm_score(slm_score));
    return {criterion, std::move(text)};
}

inline std::string join_context(const std::vector<std::string>& turns) {
    std::string out;
    for (const auto& t : turns) {
        if (!out.empty()) out += ' ';
        out += t;
    }
    return out;
}

}  // namespace dialeval::judge
