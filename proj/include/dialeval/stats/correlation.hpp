#pragma once

// Sample Pearson correlation, Spearman via mid-ranks, and two-sided p-values
// from the exact t distribution (t = r sqrt((n-2)/(1-r^2)) with n-2 degrees
// of freedom, evaluated through the regularized incomplete beta function).

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "dialeval/common.hpp"

namespace dialeval::stats {

namespace stats_detail {

// Continued fraction for the incomplete beta (modified Lentz).
inline double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 200;
    constexpr double kEps = 3e-16;
    constexpr double kFpMin = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace stats_detail

// Regularized incomplete beta I_x(a, b).
inline double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                         a * std::log(x) + b * std::log(1.0 - x));
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * stats_detail::betacf(a, b, x) / a;
    return 1.0 - bt * stats_detail::betacf(b, a, 1.0 - x) / b;
}

// Two-sided p of |T| >= |t| for Student's t with nu degrees of freedom.
inline double student_t_two_sided_p(double t, double nu) {
    if (!std::isfinite(t)) return 0.0;
    return incomplete_beta(nu / 2.0, 0.5, nu / (nu + t * t));
}

struct Correlation {
    double rho = 0.0;
    double p = 1.0;
};

inline Correlation pearson(std::span<const double> x, std::span<const double> y) {
    size_t n = x.size();
    if (n != y.size()) throw DegenerateInput("series lengths differ");
    if (n < 3) throw DegenerateInput("need at least 3 observations");

    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
        sxy += x[i] * y[i];
    }
    double dn = static_cast<double>(n);
    double vx = sxx - sx * sx / dn;
    double vy = syy - sy * sy / dn;
    if (vx <= 0.0 || vy <= 0.0)
        throw DegenerateInput("correlation undefined for a constant series");
    double rho = (sxy - sx * sy / dn) / std::sqrt(vx * vy);
    rho = std::clamp(rho, -1.0, 1.0);

    double nu = dn - 2.0;
    double p;
    if (std::fabs(rho) >= 1.0) {
        p = 0.0;
    } else {
        double t = rho * std::sqrt(nu / (1.0 - rho * rho));
        p = student_t_two_sided_p(t, nu);
    }
    return {rho, p};
}

// Mid-ranks: ties share the average of the ranks they span.
inline std::vector<double> midranks(std::span<const double> v) {
    size_t n = v.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        double shared = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

inline Correlation spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DegenerateInput("series lengths differ");
    std::vector<double> rx = midranks(x), ry = midranks(y);
    return pearson(rx, ry);
}

}  // namespace dialeval::stats
