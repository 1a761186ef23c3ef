#pragma once

// Cohen's kappa over unweighted categorical agreement:
//   kappa = (p_o - p_e) / (1 - p_e)
// with p_e from the product of the two raters' marginals.

#include <map>
#include <span>
#include <vector>

#include "dialeval/common.hpp"

namespace dialeval::stats {

inline double cohen_kappa(std::span<const int> ratings_a, std::span<const int> ratings_b) {
    size_t n = ratings_a.size();
    if (n == 0 || n != ratings_b.size())
        throw DegenerateInput("kappa needs two equal-length, non-empty rating vectors");

    std::map<int, double> marg_a, marg_b;
    double agree = 0;
    for (size_t i = 0; i < n; ++i) {
        marg_a[ratings_a[i]] += 1.0;
        marg_b[ratings_b[i]] += 1.0;
        if (ratings_a[i] == ratings_b[i]) agree += 1.0;
    }
    double dn = static_cast<double>(n);
    double p_o = agree / dn;
    double p_e = 0.0;
    for (const auto& [cat, ca] : marg_a) {
        auto it = marg_b.find(cat);
        if (it != marg_b.end()) p_e += (ca / dn) * (it->second / dn);
    }
    if (p_e >= 1.0)
        throw DegenerateInput("kappa undefined: both raters use a single shared category");
    return (p_o - p_e) / (1.0 - p_e);
}

struct KappaReport {
    struct PairwiseKappa {
        std::string annotator_a;
        std::string annotator_b;
        double kappa;
    };
    std::vector<PairwiseKappa> pairwise;
    double mean_kappa = 0.0;
};

}  // namespace dialeval::stats
