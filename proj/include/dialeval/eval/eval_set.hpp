#pragma once

// Standard / Adversarial evaluation set construction. The Standard set pairs
// positives with random negatives, the Adversarial set pairs positives with
// adversarial negatives; sampling is without replacement within a set and
// deterministic for a given seed.

#include <random>
#include <vector>

#include "dialeval/train/examples.hpp"

namespace dialeval::eval {

enum class EvalSetKind { Standard, Adversarial };

inline const char* eval_set_name(EvalSetKind kind) {
    return kind == EvalSetKind::Standard ? "standard" : "adversarial";
}

struct EvalSet {
    EvalSetKind kind;
    std::vector<train::TrainingExample> pairs;
};

namespace eval_detail {

inline std::vector<size_t> draw_without_replacement(const std::vector<size_t>& pool, size_t k,
                                                    std::mt19937_64& rng, const char* what) {
    if (pool.size() < k)
        throw InsufficientData(std::string(what) + " pool holds " +
                               std::to_string(pool.size()) + " pairs, need " + std::to_string(k));
    std::vector<size_t> shuffled = pool;
    std::vector<size_t> out;
    for (size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<size_t> d(i, shuffled.size() - 1);
        std::swap(shuffled[i], shuffled[d(rng)]);
        out.push_back(shuffled[i]);
    }
    return out;
}

}  // namespace eval_detail

inline std::pair<EvalSet, EvalSet> build_eval_sets(
    const std::vector<train::TrainingExample>& dataset, int n_per_set, std::uint64_t seed) {
    if (n_per_set < 0) throw InsufficientData("set size must be non-negative");
    std::vector<size_t> positives, randoms, adversarials;
    for (size_t i = 0; i < dataset.size(); ++i) {
        switch (dataset[i].negative_kind) {
            case train::NegativeKind::None: positives.push_back(i); break;
            case train::NegativeKind::Random: randoms.push_back(i); break;
            case train::NegativeKind::Adversarial: adversarials.push_back(i); break;
        }
    }

    std::mt19937_64 rng(seed);
    size_t n_pos = static_cast<size_t>(n_per_set) / 2 + static_cast<size_t>(n_per_set) % 2;
    size_t n_neg = static_cast<size_t>(n_per_set) - n_pos;

    auto assemble = [&](EvalSetKind kind, const std::vector<size_t>& neg_pool,
                        const char* neg_name) {
        EvalSet set{kind, {}};
        for (size_t idx :
             eval_detail::draw_without_replacement(positives, n_pos, rng, "positive"))
            set.pairs.push_back(dataset[idx]);
        for (size_t idx : eval_detail::draw_without_replacement(neg_pool, n_neg, rng, neg_name))
            set.pairs.push_back(dataset[idx]);
        return set;
    };

    EvalSet standard = assemble(EvalSetKind::Standard, randoms, "random negative");
    EvalSet adversarial =
        assemble(EvalSetKind::Adversarial, adversarials, "adversarial negative");
    return {std::move(standard), std::move(adversarial)};
}

}  // namespace dialeval::eval
