#ifndef MPPR_SIZEEST_HPP
#define MPPR_SIZEEST_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mppr/errors.hpp"
#include "mppr/graph.hpp"
#include "mppr/oracle.hpp"
#include "mppr/solver.hpp"

// Network size estimation by randomized Kaczmarz projections onto the
// nullspace of C = (I - A)^T, whose one-dimensional nullspace (for strongly
// connected graphs) is spanned by the uniform vector (1/n) 1. Row k of C is
// column k of I - A, so it is supported on page k and its out-links.

namespace mppr {

struct SparseRow {
    std::vector<PageIndex> index;
    std::vector<double> value;

    double norm_sq() const {
        double acc = 0.0;
        for (const double v : value) {
            acc += v * v;
        }
        return acc;
    }
};

struct SizeState {
    std::vector<double> s;
    std::size_t t = 0;
};

/// Row k of C: 1 - A(k,k) at k, -1/N_k at each out-link other than k.
inline SparseRow size_row(const HyperlinkGraph& g, PageIndex k) {
    SparseRow row;
    row.index.push_back(k);
    row.value.push_back(1.0 - g.self_weight(k));
    const double off = -1.0 / static_cast<double>(g.out_degree(k));
    for (const auto n : g.out_links(k)) {
        if (n != k) {
            row.index.push_back(n);
            row.value.push_back(off);
        }
    }
    return row;
}

/// s_0 = e_0.
inline SizeState init_size_state(const HyperlinkGraph& g) {
    SizeState st;
    st.s.assign(g.size(), 0.0);
    st.s[0] = 1.0;
    return st;
}

/// Projects s off row k of C. Returns the resulting drop in ||s - (1/n) 1||^2,
/// which is <c_k, s>^2 / ||c_k||^2 because c_k is orthogonal to 1. A zero row
/// (a page whose only out-link is itself) leaves s unchanged.
template <class Probe = NoProbe>
double size_step(SizeState& st, const HyperlinkGraph& g, PageIndex k, Probe&& probe = Probe{}) {
    const auto links = g.out_links(k);
    const double inv_degree = 1.0 / static_cast<double>(links.size());
    bool self_loop = false;
    double others = 0.0;
    std::size_t other_count = 0;

    probe.read(k);
    for (const auto n : links) {
        if (n == k) {
            self_loop = true;
            continue;
        }
        probe.read(n);
        others += st.s[n];
        ++other_count;
    }
    const double diag = self_loop ? 1.0 - inv_degree : 1.0;
    const double norm_sq = diag * diag + inv_degree * inv_degree * static_cast<double>(other_count);
    ++st.t;
    if (norm_sq == 0.0) {
        return 0.0;
    }
    const double dot = diag * st.s[k] - inv_degree * others;
    const double coeff = dot / norm_sq;

    probe.write(k);
    st.s[k] -= coeff * diag;
    const double push = coeff * inv_degree;
    for (const auto n : links) {
        if (n != k) {
            probe.write(n);
            st.s[n] += push;
        }
    }
    return dot * coeff;
}

/// ||s - (1/n) 1||^2.
inline double size_error(const SizeState& st) {
    const double target = 1.0 / static_cast<double>(st.s.size());
    double acc = 0.0;
    for (const double v : st.s) {
        acc += (v - target) * (v - target);
    }
    return acc;
}

inline void require_strongly_connected(const HyperlinkGraph& g) {
    if (!is_strongly_connected(g)) {
        throw PreconditionError(PreconditionError::Kind::NotStronglyConnected,
                                "size estimation requires a strongly connected graph");
    }
}

/// Continues `st` for `steps` uniformly sampled projections, calling
/// observer(t, ||s_t - (1/n) 1||^2) after each one.
template <class Observer>
void run_size(SizeState& st, const HyperlinkGraph& g, std::size_t steps, PageSampler& sample,
              Observer&& observer) {
    const auto n = g.size();
    double err = size_error(st);
    std::size_t since_refresh = 0;
    for (std::size_t i = 0; i < steps; ++i) {
        const double drop = size_step(st, g, sample());
        if (++since_refresh >= n) {
            err = size_error(st);
            since_refresh = 0;
        } else {
            err = std::max(0.0, err - drop);
        }
        observer(st.t, err);
    }
}

template <class Observer>
SizeState run_size(const HyperlinkGraph& g, std::size_t steps, std::uint64_t seed, Observer&& observer) {
    require_strongly_connected(g);
    auto st = init_size_state(g);
    PageSampler sample(seed, g.size());
    run_size(st, g, steps, sample, std::forward<Observer>(observer));
    return st;
}

inline SizeState run_size(const HyperlinkGraph& g, std::size_t steps, std::uint64_t seed) {
    return run_size(g, steps, seed, [](std::size_t, double) {});
}

/// Page i's estimate of the network size, 1/s_i.
inline double estimate_size(const SizeState& st, PageIndex i) {
    if (!(st.s[i] > 0.0)) {
        throw PreconditionError(PreconditionError::Kind::NonPositiveEntry,
                                "entry " + std::to_string(i) + " of the size iterate is not positive");
    }
    return 1.0 / st.s[i];
}

struct SizeSpectrum {
    /// Second-smallest eigenvalue of sum_k c_k c_k^T / ||c_k||^2.
    double sigma2 = 0.0;
    /// Set when n = 1 and sigma2 is undefined.
    bool degenerate = false;

    double rate(std::size_t n) const {
        return std::clamp(1.0 - sigma2 / static_cast<double>(n), 0.0, 1.0);
    }
};

inline Eigen::MatrixXd size_projector_sum(const HyperlinkGraph& g) {
    const auto n = static_cast<Eigen::Index>(g.size());
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
    for (PageIndex k = 0; k < g.size(); ++k) {
        const auto row = size_row(g, k);
        const double norm_sq = row.norm_sq();
        if (norm_sq == 0.0) {
            continue;
        }
        for (std::size_t a = 0; a < row.index.size(); ++a) {
            for (std::size_t b = 0; b < row.index.size(); ++b) {
                acc(static_cast<Eigen::Index>(row.index[a]), static_cast<Eigen::Index>(row.index[b])) +=
                    row.value[a] * row.value[b] / norm_sq;
            }
        }
    }
    return acc;
}

inline SizeSpectrum size_spectral(const HyperlinkGraph& g) {
    detail::require_dense_size(g, "size_spectral");
    if (g.size() == 1) {
        return {0.0, true};
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(size_projector_sum(g), Eigen::EigenvaluesOnly);
    return {eig.eigenvalues()(1), false};
}

/// Bound on E||s_t - (1/n) 1||^2 from s_0 = e_0.
inline double size_bound(const SizeSpectrum& spec, std::size_t n, std::size_t t) {
    const double initial = 1.0 - 1.0 / static_cast<double>(n);
    return std::pow(spec.rate(n), static_cast<double>(t)) * initial;
}

} // namespace mppr

#endif
