#ifndef MPPR_TESTS_TEST_SUPPORT_HPP
#define MPPR_TESTS_TEST_SUPPORT_HPP

// Fixture graphs and a plain dense reference for single update steps. The
// dense routines deliberately avoid the library's local update code and
// Eigen: they build B and C as row-major arrays and apply the projection
// formulas verbatim.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "mppr/graph.hpp"

namespace mppr::fixtures {

inline constexpr const char* kG1 = "1\n0 0\n";
inline constexpr const char* kG2 = "2\n0 1\n1 0\n";
inline constexpr const char* kG3 = "3\n0 1\n1 0\n1 2\n2 0\n";

inline HyperlinkGraph g1() { return parse_graph(kG1); }
inline HyperlinkGraph g2() { return parse_graph(kG2); }
inline HyperlinkGraph g3() { return parse_graph(kG3); }

using Dense = std::vector<std::vector<double>>;

inline Dense dense_a(const HyperlinkGraph& g) {
    const auto n = g.size();
    Dense a(n, std::vector<double>(n, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        for (auto i : g.out_links(j)) {
            a[i][j] = 1.0 / static_cast<double>(g.out_degree(j));
        }
    }
    return a;
}

inline Dense dense_b(const HyperlinkGraph& g, double alpha) {
    auto b = dense_a(g);
    for (std::size_t i = 0; i < b.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            b[i][j] = (i == j ? 1.0 : 0.0) - alpha * b[i][j];
        }
    }
    return b;
}

struct DenseSolverStep {
    std::vector<double> x;
    std::vector<double> r;
};

/// x' = x + (B(:,k)^T r / ||B(:,k)||^2) e_k, r' = r - (B(:,k)^T r / ||B(:,k)||^2) B(:,k).
inline DenseSolverStep dense_solver_step(const Dense& b, std::vector<double> x, std::vector<double> r,
                                         std::size_t k) {
    double dot = 0.0;
    double norm = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        dot += b[i][k] * r[i];
        norm += b[i][k] * b[i][k];
    }
    const double coeff = dot / norm;
    x[k] += coeff;
    for (std::size_t i = 0; i < b.size(); ++i) {
        r[i] -= coeff * b[i][k];
    }
    return {std::move(x), std::move(r)};
}

/// s' = s - (<C(k,:), s> / ||C(k,:)||^2) C(k,:) with C = (I - A)^T.
inline std::vector<double> dense_size_step(const HyperlinkGraph& g, std::vector<double> s, std::size_t k) {
    const auto a = dense_a(g);
    const auto n = g.size();
    std::vector<double> row(n);
    for (std::size_t j = 0; j < n; ++j) {
        row[j] = (j == k ? 1.0 : 0.0) - a[j][k];
    }
    double dot = 0.0;
    double norm = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        dot += row[j] * s[j];
        norm += row[j] * row[j];
    }
    if (norm == 0.0) {
        return s;
    }
    for (std::size_t j = 0; j < n; ++j) {
        s[j] -= dot / norm * row[j];
    }
    return s;
}

/// Random graph with independently drawn out-link sets (self-loops allowed).
inline HyperlinkGraph random_graph(std::size_t n, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> degree(1, n);
    std::uniform_int_distribution<std::size_t> target(0, n - 1);
    std::vector<std::vector<PageIndex>> links(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::set<PageIndex> chosen;
        const auto d = degree(rng);
        while (chosen.size() < d) {
            chosen.insert(target(rng));
        }
        links[k].assign(chosen.begin(), chosen.end());
    }
    return HyperlinkGraph(n, std::move(links));
}

/// Random strongly connected graph: a random Hamiltonian cycle plus extra links.
inline HyperlinkGraph random_strongly_connected(std::size_t n, std::mt19937_64& rng) {
    std::vector<PageIndex> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        order[i] = i;
    }
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::set<PageIndex>> links(n);
    for (std::size_t i = 0; i < n; ++i) {
        links[order[i]].insert(order[(i + 1) % n]);
    }
    std::bernoulli_distribution extra(0.3);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
            if (extra(rng)) {
                links[u].insert(v);
            }
        }
    }
    std::vector<std::vector<PageIndex>> out(n);
    for (std::size_t u = 0; u < n; ++u) {
        out[u].assign(links[u].begin(), links[u].end());
    }
    return HyperlinkGraph(n, std::move(out));
}

} // namespace mppr::fixtures

#endif
