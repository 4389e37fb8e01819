#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mppr/oracle.hpp"
#include "test_support.hpp"

namespace mppr {
namespace {

using fixtures::g1;
using fixtures::g2;
using fixtures::g3;

constexpr double kAlpha = 0.85;

TEST(SolveDense, Fixtures) {
    EXPECT_NEAR(solve_dense(g1(), kAlpha).x_star[0], 1.0, 1e-14);
    const auto two = solve_dense(g2(), kAlpha).x_star;
    EXPECT_NEAR(two[0], 1.0, 1e-14);
    EXPECT_NEAR(two[1], 1.0, 1e-14);
    const auto three = solve_dense(g3(), kAlpha).x_star;
    EXPECT_NEAR(three[0], 1.1921989824759749, 1e-12);
    EXPECT_NEAR(three[1], 1.1633691351045785, 1e-12);
    EXPECT_NEAR(three[2], 0.6444318824194459, 1e-12);
}

TEST(SolveDense, SatisfiesFixedPointOfPerturbedMatrix) {
    // M x = x with M = alpha*A + (1 - alpha)/n * 1 1^T
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = fixtures::random_graph(2 + trial, rng);
        const auto x = solve_dense(g, kAlpha).x_star;
        const auto a = fixtures::dense_a(g);
        const auto n = g.size();
        double sum = 0.0;
        for (double v : x) {
            sum += v;
        }
        for (std::size_t i = 0; i < n; ++i) {
            double mx = (1 - kAlpha) * sum / static_cast<double>(n);
            for (std::size_t j = 0; j < n; ++j) {
                mx += kAlpha * a[i][j] * x[j];
            }
            EXPECT_NEAR(mx, x[i], 1e-12);
        }
    }
}

TEST(SolveDense, RejectsOversizedGraphs) {
    std::vector<std::vector<PageIndex>> links(kMaxDensePages + 1);
    for (std::size_t k = 0; k < links.size(); ++k) {
        links[k] = {(k + 1) % links.size()};
    }
    const HyperlinkGraph big(links.size(), links);
    try {
        solve_dense(big, kAlpha);
        FAIL();
    } catch (const PreconditionError& e) {
        EXPECT_EQ(e.kind(), PreconditionError::Kind::TooLargeForDense);
    }
    EXPECT_THROW(spectral_rate(big, kAlpha), PreconditionError);
}

TEST(PowerIteration, AgreesWithDenseSolve) {
    for (const auto& g : {g1(), g2(), g3()}) {
        const auto dense = solve_dense(g, kAlpha).x_star;
        const auto power = power_iteration_pagerank(g, kAlpha, 1e-12, 10000).x_star;
        for (std::size_t i = 0; i < g.size(); ++i) {
            EXPECT_NEAR(power[i], dense[i], 1e-9);
        }
    }
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        const auto g = fixtures::random_graph(1 + trial, rng);
        const auto dense = solve_dense(g, kAlpha).x_star;
        const auto power = power_iteration_pagerank(g, kAlpha, 1e-12, 10000).x_star;
        for (std::size_t i = 0; i < g.size(); ++i) {
            EXPECT_NEAR(power[i], dense[i], 1e-9);
        }
    }
}

TEST(PowerIteration, SinglePageConvergesImmediately) {
    EXPECT_EQ(power_iteration_pagerank(g1(), kAlpha, 1e-12, 1).x_star, std::vector<double>{1.0});
}

TEST(PowerIteration, ReportsNonConvergence) {
    try {
        power_iteration_pagerank(g3(), kAlpha, 1e-12, 3);
        FAIL();
    } catch (const NumericalError& e) {
        EXPECT_EQ(e.kind(), NumericalError::Kind::NoConvergence);
    }
    EXPECT_THROW(power_iteration_pagerank(g3(), kAlpha, 0.0, 10), std::invalid_argument);
}

TEST(SpectralRate, Fixtures) {
    const auto one = spectral_rate(g1(), kAlpha);
    EXPECT_NEAR(one.sigma_min, 1.0, 1e-15);
    EXPECT_EQ(one.rate, 0.0);

    const auto two = spectral_rate(g2(), kAlpha);
    EXPECT_NEAR(two.sigma_min, 0.15 / std::sqrt(1.7225), 1e-8 * two.sigma_min);
    EXPECT_NEAR(two.sigma_min, 0.11429089766391894, 1e-12);
    EXPECT_NEAR(two.rate, 0.9934687953555879, 1e-12);
    EXPECT_NEAR(two.r0_norm_sq, 0.045, 1e-16);

    EXPECT_NEAR(spectral_rate(g3(), kAlpha).sigma_min, 0.11609031396124213, 1e-12);
}

TEST(SpectralRate, PositiveOnRandomGraphs) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 30; ++trial) {
        const auto rep = spectral_rate(fixtures::random_graph(1 + trial, rng), kAlpha);
        EXPECT_GT(rep.sigma_min, 0.0);
        EXPECT_GE(rep.rate, 0.0);
        EXPECT_LT(rep.rate, 1.0);
    }
}

TEST(Bounds, Evaluators) {
    const auto two = spectral_rate(g2(), kAlpha);
    EXPECT_EQ(residual_bound(two, 0), two.r0_norm_sq);
    EXPECT_NEAR(residual_bound(two, 1), 0.04470609579100145, 1e-14);
    EXPECT_NEAR(error_bound(two, 1), 0.04470609579100145 / (two.sigma_min * two.sigma_min), 1e-12);
    const auto one = spectral_rate(g1(), kAlpha);
    EXPECT_EQ(residual_bound(one, 1), 0.0);
    EXPECT_NEAR(residual_bound(one, 0), 0.0225, 1e-16);
}

TEST(ColumnStochasticity, PowersPreserveTotalMass) {
    // 1^T A^k 1 = n for k = 0..3
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const auto g = fixtures::random_graph(1 + trial % 10, rng);
        const auto a = fixtures::dense_a(g);
        const auto n = g.size();
        std::vector<double> v(n, 1.0);
        for (int power = 0; power <= 3; ++power) {
            double total = 0.0;
            for (double e : v) {
                total += e;
            }
            EXPECT_NEAR(total, static_cast<double>(n), 1e-12);
            std::vector<double> next(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    next[i] += a[i][j] * v[j];
                }
            }
            v = next;
        }
    }
}

} // namespace
} // namespace mppr
