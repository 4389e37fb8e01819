#ifndef MPPR_ORACLE_HPP
#define MPPR_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mppr/errors.hpp"
#include "mppr/graph.hpp"
#include "mppr/solver.hpp"

// Dense reference computations used to verify the distributed solver. All of
// them are O(n^3) or O(n^2) in memory and refuse graphs above kMaxDensePages.

namespace mppr {

inline constexpr std::size_t kMaxDensePages = 2000;

struct OracleSolution {
    /// Scaled PageRank: entries sum to n.
    std::vector<double> x_star;
};

struct SpectralReport {
    std::size_t n = 0;
    /// Smallest singular value of the column-normalized B.
    double sigma_min = 0.0;
    /// Expected per-step contraction of ||r||^2: 1 - sigma_min^2 / n.
    double rate = 0.0;
    /// ||r_0||^2 = n (1 - alpha)^2.
    double r0_norm_sq = 0.0;
};

namespace detail {

inline void require_dense_size(const HyperlinkGraph& g, const char* what) {
    if (g.size() > kMaxDensePages) {
        throw PreconditionError(PreconditionError::Kind::TooLargeForDense,
                                std::string(what) + ": n = " + std::to_string(g.size()) +
                                    " exceeds the dense limit of " + std::to_string(kMaxDensePages));
    }
}

inline void require_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("alpha must lie in (0, 1)");
    }
}

inline void check_scaled_pagerank(const std::vector<double>& x) {
    const auto n = static_cast<double>(x.size());
    double sum = 0.0;
    for (const double v : x) {
        if (!(v > 0.0)) {
            throw NumericalError(NumericalError::Kind::InvariantViolated,
                                 "scaled PageRank has a non-positive entry");
        }
        sum += v;
    }
    if (std::abs(sum - n) > 1e-8 * n) {
        throw NumericalError(NumericalError::Kind::InvariantViolated,
                             "scaled PageRank sums to " + std::to_string(sum) + ", expected " +
                                 std::to_string(x.size()));
    }
}

} // namespace detail

/// Dense hyperlink matrix, A(i,j) = 1/N_j when j links to i.
inline Eigen::MatrixXd hyperlink_matrix(const HyperlinkGraph& g) {
    const auto n = static_cast<Eigen::Index>(g.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (PageIndex j = 0; j < g.size(); ++j) {
        const double w = 1.0 / static_cast<double>(g.out_degree(j));
        for (const auto i : g.out_links(j)) {
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = w;
        }
    }
    return a;
}

/// B = I - alpha*A.
inline Eigen::MatrixXd pagerank_system_matrix(const HyperlinkGraph& g, double alpha) {
    const auto n = static_cast<Eigen::Index>(g.size());
    return Eigen::MatrixXd::Identity(n, n) - alpha * hyperlink_matrix(g);
}

/// Solves (I - alpha*A) x = (1 - alpha) 1 by LU with partial pivoting.
inline OracleSolution solve_dense(const HyperlinkGraph& g, double alpha) {
    detail::require_alpha(alpha);
    detail::require_dense_size(g, "solve_dense");
    const auto n = static_cast<Eigen::Index>(g.size());
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(pagerank_system_matrix(g, alpha));
    if (!(lu.rcond() > std::numeric_limits<double>::epsilon())) {
        throw NumericalError(NumericalError::Kind::SingularSystem, "I - alpha*A is numerically singular");
    }
    const Eigen::VectorXd x = lu.solve(Eigen::VectorXd::Constant(n, 1.0 - alpha));
    OracleSolution sol{std::vector<double>(x.data(), x.data() + x.size())};
    detail::check_scaled_pagerank(sol.x_star);
    return sol;
}

/// Power iteration v <- alpha*A v + (1 - alpha)/n on the probability simplex,
/// renormalized each step, until ||v_next - v||_1 <= tol. Returns n*v.
inline OracleSolution power_iteration_pagerank(const HyperlinkGraph& g, double alpha, double tol,
                                               std::size_t max_iters) {
    detail::require_alpha(alpha);
    if (!(tol > 0.0)) {
        throw std::invalid_argument("power iteration tolerance must be positive");
    }
    const auto n = g.size();
    const double teleport = (1.0 - alpha) / static_cast<double>(n);
    std::vector<double> v(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n);
    for (std::size_t it = 0; it < max_iters; ++it) {
        std::fill(next.begin(), next.end(), teleport);
        for (PageIndex j = 0; j < n; ++j) {
            const double share = alpha * v[j] / static_cast<double>(g.out_degree(j));
            for (const auto i : g.out_links(j)) {
                next[i] += share;
            }
        }
        double mass = 0.0;
        for (const double e : next) {
            mass += e;
        }
        double change = 0.0;
        for (PageIndex i = 0; i < n; ++i) {
            next[i] /= mass;
            change += std::abs(next[i] - v[i]);
        }
        v.swap(next);
        if (change <= tol) {
            for (auto& e : v) {
                e *= static_cast<double>(n);
            }
            return {std::move(v)};
        }
    }
    throw NumericalError(NumericalError::Kind::NoConvergence,
                         "power iteration did not reach tolerance in " + std::to_string(max_iters) +
                             " iterations");
}

/// Column-normalized B, columns b_k = B(:,k) / ||B(:,k)||.
inline Eigen::MatrixXd normalized_system_matrix(const HyperlinkGraph& g, double alpha) {
    Eigen::MatrixXd b = pagerank_system_matrix(g, alpha);
    b.colwise().normalize();
    return b;
}

inline SpectralReport spectral_rate(const HyperlinkGraph& g, double alpha) {
    detail::require_alpha(alpha);
    detail::require_dense_size(g, "spectral_rate");
    const Eigen::BDCSVD<Eigen::MatrixXd> svd(normalized_system_matrix(g, alpha));
    SpectralReport rep;
    rep.n = g.size();
    rep.sigma_min = svd.singularValues().minCoeff();
    const auto n = static_cast<double>(g.size());
    rep.rate = std::clamp(1.0 - rep.sigma_min * rep.sigma_min / n, 0.0, 1.0);
    rep.r0_norm_sq = n * (1.0 - alpha) * (1.0 - alpha);
    return rep;
}

/// Bound on E||r_t||^2.
inline double residual_bound(const SpectralReport& rep, std::size_t t) {
    return std::pow(rep.rate, static_cast<double>(t)) * rep.r0_norm_sq;
}

/// Bound on E||x_t - x*||^2.
inline double error_bound(const SpectralReport& rep, std::size_t t) {
    return residual_bound(rep, t) / (rep.sigma_min * rep.sigma_min);
}

/// ||x - x*||^2.
inline double squared_error(const std::vector<double>& x, const OracleSolution& sol) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - sol.x_star[i];
        acc += d * d;
    }
    return acc;
}

} // namespace mppr

#endif
