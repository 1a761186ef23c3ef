#pragma once

// Batch construction: roughly one positive per negative (within one), with
// negatives drawn uniformly from the pooled random + adversarial examples.
// Deterministic given the seed.

#include <random>
#include <vector>

#include "dialeval/train/examples.hpp"

namespace dialeval::train {

inline std::vector<size_t> sample_training_batch(const std::vector<TrainingExample>& dataset,
                                                 int n, std::uint64_t seed) {
    if (n < 2) throw DegenerateBatch("batch size must be at least 2");
    std::vector<size_t> pos_pool, neg_pool;
    for (size_t i = 0; i < dataset.size(); ++i)
        (dataset[i].label == 1 ? pos_pool : neg_pool).push_back(i);
    if (pos_pool.empty() || neg_pool.empty())
        throw DegenerateBatch("dataset lacks one of the label classes");

    std::mt19937_64 rng(seed);
    int n_pos = n / 2 + (n % 2);
    int n_neg = n - n_pos;

    auto draw = [&rng](const std::vector<size_t>& pool, int k) {
        std::vector<size_t> out;
        if (static_cast<size_t>(k) <= pool.size()) {
            // without replacement: partial Fisher-Yates over a copy
            std::vector<size_t> shuffled = pool;
            for (int i = 0; i < k; ++i) {
                std::uniform_int_distribution<size_t> d(i, shuffled.size() - 1);
                std::swap(shuffled[i], shuffled[d(rng)]);
                out.push_back(shuffled[i]);
            }
        } else {
            std::uniform_int_distribution<size_t> d(0, pool.size() - 1);
            for (int i = 0; i < k; ++i) out.push_back(pool[d(rng)]);
        }
        return out;
    };

    std::vector<size_t> batch = draw(pos_pool, n_pos);
    for (size_t idx : draw(neg_pool, n_neg)) batch.push_back(idx);
    return batch;
}

}  // namespace dialeval::train
