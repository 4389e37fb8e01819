#ifndef MPPR_SOLVER_HPP
#define MPPR_SOLVER_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mppr/graph.hpp"

namespace mppr {

struct SolverConfig {
    double alpha = 0.85;
    std::uint64_t seed = 0;
    std::size_t max_iters = 0;
    /// Stop once the squared residual norm falls to or below this value.
    std::optional<double> stop_tol;

    void validate() const {
        if (!(alpha > 0.0 && alpha < 1.0)) {
            throw std::invalid_argument("alpha must lie in (0, 1)");
        }
        if (stop_tol && !(*stop_tol >= 0.0)) {
            throw std::invalid_argument("stop_tol must be non-negative");
        }
    }
};

/// Two scalars per page (estimate and residual) plus the precomputed squared
/// column norms of B = I - alpha*A.
struct SolverState {
    std::vector<double> x;
    std::vector<double> r;
    std::vector<double> colnorm_sq;
    std::size_t t = 0;
};

/// ||B(:,k)||^2 = 1 - 2*alpha*A(k,k) + alpha^2/N_k, from local information only.
inline double column_norm_sq(const HyperlinkGraph& g, double alpha, PageIndex k) {
    const auto nk = static_cast<double>(g.out_degree(k));
    return 1.0 - 2.0 * alpha * g.self_weight(k) + alpha * alpha / nk;
}

inline SolverState init_state(const HyperlinkGraph& g, double alpha) {
    const auto n = g.size();
    SolverState s;
    s.x.assign(n, 0.0);
    s.r.assign(n, 1.0 - alpha);
    s.colnorm_sq.resize(n);
    for (PageIndex k = 0; k < n; ++k) {
        s.colnorm_sq[k] = column_norm_sq(g, alpha, k);
    }
    return s;
}

inline SolverState init_state(const HyperlinkGraph& g, const SolverConfig& cfg) {
    cfg.validate();
    return init_state(g, cfg.alpha);
}

/// Access hooks invoked by step(); the default does nothing and inlines away.
struct NoProbe {
    void read(PageIndex) noexcept {}
    void write(PageIndex) noexcept {}
    void estimate_write(PageIndex) noexcept {}
};

/// One matching-pursuit update on page k. Page k reads the residuals of its
/// out-links, updates its own estimate, and pushes a correction to each
/// out-link's residual and to its own. Returns the step coefficient
/// delta = B(:,k)^T r / ||B(:,k)||^2.
template <class Probe = NoProbe>
double step(SolverState& s, const HyperlinkGraph& g, double alpha, PageIndex k, Probe&& probe = Probe{}) {
    const auto links = g.out_links(k);
    const double inv_degree = 1.0 / static_cast<double>(links.size());

    probe.read(k);
    const double own = s.r[k];
    double neighbor_sum = 0.0;
    bool self_loop = false;
    for (const auto n : links) {
        probe.read(n);
        neighbor_sum += s.r[n];
        self_loop = self_loop || n == k;
    }

    const double delta = (own - alpha * inv_degree * neighbor_sum) / s.colnorm_sq[k];
    probe.estimate_write(k);
    s.x[k] += delta;

    const double push = delta * alpha * inv_degree;
    for (const auto n : links) {
        if (n != k) {
            probe.write(n);
            s.r[n] += push;
        }
    }
    // B(k,k) = 1 - alpha*A(k,k)
    probe.write(k);
    s.r[k] -= delta * (self_loop ? 1.0 - alpha * inv_degree : 1.0);
    ++s.t;
    return delta;
}

/// Uniform page selection with replacement from a seeded 64-bit engine.
class PageSampler {
public:
    PageSampler(std::uint64_t seed, std::size_t n) : rng_(seed), pick_(0, n - 1) {}

    PageIndex operator()() { return pick_(rng_); }

private:
    std::mt19937_64 rng_;
    std::uniform_int_distribution<PageIndex> pick_;
};

inline double squared_norm(const std::vector<double>& v) {
    double acc = 0.0;
    for (const double e : v) {
        acc += e * e;
    }
    return acc;
}

/// Continues `s` for up to cfg.max_iters uniformly sampled steps, calling
/// observer(t, ||r_t||^2) after each one. The squared residual norm is
/// tracked incrementally (each step removes delta^2 * ||B(:,k)||^2) and
/// recomputed exactly every n steps.
template <class Observer>
void run(SolverState& s, const HyperlinkGraph& g, const SolverConfig& cfg, Observer&& observer) {
    cfg.validate();
    const auto n = g.size();
    PageSampler sample(cfg.seed, n);
    double res_sq = squared_norm(s.r);
    std::size_t since_refresh = 0;

    const auto reached_tol = [&] {
        if (!cfg.stop_tol || res_sq > *cfg.stop_tol) {
            return false;
        }
        res_sq = squared_norm(s.r);
        since_refresh = 0;
        return res_sq <= *cfg.stop_tol;
    };

    for (std::size_t i = 0; i < cfg.max_iters; ++i) {
        if (reached_tol()) {
            return;
        }
        const auto k = sample();
        const double delta = step(s, g, cfg.alpha, k);
        if (++since_refresh >= n) {
            res_sq = squared_norm(s.r);
            since_refresh = 0;
        } else {
            res_sq = std::max(0.0, res_sq - delta * delta * s.colnorm_sq[k]);
        }
        observer(s.t, res_sq);
    }
}

template <class Observer>
SolverState run(const HyperlinkGraph& g, const SolverConfig& cfg, Observer&& observer) {
    auto s = init_state(g, cfg);
    run(s, g, cfg, std::forward<Observer>(observer));
    return s;
}

inline SolverState run(const HyperlinkGraph& g, const SolverConfig& cfg) {
    return run(g, cfg, [](std::size_t, double) {});
}

/// max_i |(B x + r - (1 - alpha) 1)_i|, evaluated densely from the out-links.
inline double conservation_defect(const SolverState& s, const HyperlinkGraph& g, double alpha) {
    const auto n = g.size();
    std::vector<double> bx(s.x);
    for (PageIndex j = 0; j < n; ++j) {
        const double share = alpha * s.x[j] / static_cast<double>(g.out_degree(j));
        for (const auto i : g.out_links(j)) {
            bx[i] -= share;
        }
    }
    double worst = 0.0;
    for (PageIndex i = 0; i < n; ++i) {
        worst = std::max(worst, std::abs(bx[i] + s.r[i] - (1.0 - alpha)));
    }
    return worst;
}

} // namespace mppr

#endif
