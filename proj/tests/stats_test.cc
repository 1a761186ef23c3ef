#include "dialeval/stats/correlation.hpp"

#include <random>

#include "dialeval/stats/kappa.hpp"
#include "gtest/gtest.h"
#include "support/stats_reference.hpp"

using namespace dialeval;
using namespace dialeval::stats;

namespace {

using dialeval::testing::reference_pearson;
using dialeval::testing::reference_midranks;

TEST(Pearson, PerfectLinearAndAntiLinear) {
    std::vector<double> x{1, 2, 3}, y{2, 4, 6}, z{3, 2, 1};
    Correlation up = pearson(x, y);
    EXPECT_DOUBLE_EQ(up.rho, 1.0);
    EXPECT_NEAR(up.p, 0.0, 1e-12);
    EXPECT_DOUBLE_EQ(pearson(x, z).rho, -1.0);
}

TEST(Pearson, MatchesReferenceOnRandomVectors) {
    std::mt19937_64 rng(123);
    std::uniform_int_distribution<int> len(3, 40), val(-10, 10);
    for (int trial = 0; trial < 1000; ++trial) {
        int n = len(rng);
        std::vector<double> x(n), y(n);
        bool degenerate = true;
        while (degenerate) {
            for (int i = 0; i < n; ++i) {
                x[i] = val(rng);
                y[i] = val(rng);
            }
            degenerate = std::equal(x.begin() + 1, x.end(), x.begin()) ||
                         std::equal(y.begin() + 1, y.end(), y.begin());
        }
        EXPECT_NEAR(pearson(x, y).rho, reference_pearson(x, y), 1e-12) << "trial " << trial;
    }
}

TEST(Pearson, SymmetryAndAffineInvariance) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> val(-5, 5);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> x(12), y(12), y_scaled(12), y_flipped(12);
        for (int i = 0; i < 12; ++i) {
            x[i] = val(rng);
            y[i] = val(rng);
            y_scaled[i] = 2.5 * y[i] + 3.0;
            y_flipped[i] = -1.5 * y[i] + 1.0;
        }
        Correlation xy = pearson(x, y), yx = pearson(y, x);
        EXPECT_NEAR(xy.rho, yx.rho, 1e-12);
        EXPECT_NEAR(xy.p, yx.p, 1e-12);
        EXPECT_NEAR(pearson(x, y_scaled).rho, xy.rho, 1e-12);
        EXPECT_NEAR(pearson(x, y_flipped).rho, -xy.rho, 1e-12);
    }
}

TEST(Pearson, DegenerateInputs) {
    std::vector<double> constant{2, 2, 2}, x{1, 2, 3}, tiny{1, 2};
    EXPECT_THROW(pearson(constant, x), DegenerateInput);
    EXPECT_THROW(pearson(x, constant), DegenerateInput);
    EXPECT_THROW(pearson(tiny, tiny), DegenerateInput);
}

TEST(Pearson, PValueAgainstKnownValues) {
    // r = 0.9, n = 5 -> t = 3.576, p ~= 0.0374 (two-sided, 3 dof)
    std::vector<double> x{1, 2, 3, 4, 5}, y{1.05, 1.9, 3.2, 3.8, 5.4};
    Correlation c = pearson(x, y);
    double t = c.rho * std::sqrt(3.0 / (1 - c.rho * c.rho));
    EXPECT_NEAR(c.p, student_t_two_sided_p(t, 3), 1e-15);
    EXPECT_GT(c.p, 0.0);
    EXPECT_LT(c.p, 1.0);

    // spot values of the t CDF machinery itself
    EXPECT_NEAR(student_t_two_sided_p(0.0, 10), 1.0, 1e-12);
    EXPECT_NEAR(student_t_two_sided_p(2.228, 10), 0.05, 1e-3);   // classic t table
    EXPECT_NEAR(student_t_two_sided_p(12.706, 1), 0.05, 1e-4);
}

TEST(Spearman, MonotoneTransformInvariance) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> val(0.1, 4.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(10), y(10), y_exp(10);
        for (int i = 0; i < 10; ++i) {
            x[i] = val(rng);
            y[i] = val(rng);
            y_exp[i] = std::exp(y[i]);  // strictly monotone transform
        }
        EXPECT_NEAR(spearman(x, y).rho, spearman(x, y_exp).rho, 1e-12);
    }
    std::vector<double> xs{0.5, 1.5, 2.5, 3.5}, cube{0.125, 3.375, 15.625, 42.875};
    EXPECT_DOUBLE_EQ(spearman(xs, cube).rho, 1.0);
}

TEST(Spearman, HandComputedCase) {
    std::vector<double> x{1, 2, 3, 4}, y{1, 3, 2, 4};
    EXPECT_DOUBLE_EQ(spearman(x, y).rho, 0.8);
}

TEST(Spearman, MidRanksHandleTies) {
    std::vector<double> tied{1, 1, 2};
    EXPECT_EQ(midranks(tied), (std::vector<double>{1.5, 1.5, 3.0}));
    std::vector<double> more{5, 3, 3, 3, 1};
    EXPECT_EQ(midranks(more), (std::vector<double>{5.0, 3.0, 3.0, 3.0, 1.0}));
}

TEST(Spearman, RanksMatchBruteForceReference) {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> val(0, 5);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> v(15);
        for (auto& e : v) e = val(rng);
        EXPECT_EQ(midranks(v), reference_midranks(v)) << "trial " << trial;
    }
}

TEST(CohenKappa, IdenticalRatingsGiveOne) {
    std::vector<int> a{1, 2, 3, 4, 5, 1, 2};
    EXPECT_DOUBLE_EQ(cohen_kappa(a, a), 1.0);
}

TEST(CohenKappa, HandBuiltContingencyTable) {
    std::vector<int> a{1, 1, 0, 0}, b{1, 0, 0, 0};
    EXPECT_DOUBLE_EQ(cohen_kappa(a, b), 0.5);
}

TEST(CohenKappa, BoundsAndDegeneracy) {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> val(1, 5);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> a(20), b(20);
        for (int i = 0; i < 20; ++i) {
            a[i] = val(rng);
            b[i] = val(rng);
        }
        if (std::equal(a.begin() + 1, a.end(), a.begin()) &&
            std::equal(b.begin() + 1, b.end(), b.begin()) && a[0] == b[0])
            continue;
        double k = cohen_kappa(a, b);
        EXPECT_LE(k, 1.0);
        EXPECT_GE(k, -1.0);
        if (a == b) EXPECT_DOUBLE_EQ(k, 1.0);
    }
    std::vector<int> ones{1, 1, 1};
    EXPECT_THROW(cohen_kappa(ones, ones), DegenerateInput);
    std::vector<int> empty;
    EXPECT_THROW(cohen_kappa(empty, empty), DegenerateInput);
}

}  // namespace
