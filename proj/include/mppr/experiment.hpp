#ifndef MPPR_EXPERIMENT_HPP
#define MPPR_EXPERIMENT_HPP

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "mppr/graph.hpp"
#include "mppr/oracle.hpp"
#include "mppr/sizeest.hpp"
#include "mppr/solver.hpp"

namespace mppr {

struct TrajectoryRow {
    std::size_t t = 0;
    /// Mean over rounds of (1/n)||x_t - x*||^2.
    double mean_err = 0.0;
    /// Mean over rounds of ||r_t||^2.
    double mean_res = 0.0;
    double residual_bound = 0.0;
    /// error_bound(t) / n, on the same scale as mean_err.
    double error_bound = 0.0;

    friend bool operator==(const TrajectoryRow&, const TrajectoryRow&) = default;
};

struct TrajectoryTable {
    std::vector<TrajectoryRow> rows;

    friend bool operator==(const TrajectoryTable&, const TrajectoryTable&) = default;
};

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of round `round` under base seed `base`: mix64(base ^ mix64(round)).
constexpr std::uint64_t round_seed(std::uint64_t base, std::size_t round) noexcept {
    return mix64(base ^ mix64(static_cast<std::uint64_t>(round)));
}

/// t = m * stride for m = 0..count-1.
inline std::vector<std::size_t> even_checkpoints(std::size_t stride, std::size_t count) {
    std::vector<std::size_t> out(count);
    for (std::size_t m = 0; m < count; ++m) {
        out[m] = m * stride;
    }
    return out;
}

/// The default grid t = m*n, m = 0..20.
inline std::vector<std::size_t> default_checkpoints(std::size_t n) { return even_checkpoints(n, 21); }

namespace detail {

inline void require_increasing(const std::vector<std::size_t>& checkpoints) {
    if (std::adjacent_find(checkpoints.begin(), checkpoints.end(),
                           [](std::size_t a, std::size_t b) { return a >= b; }) != checkpoints.end()) {
        throw std::invalid_argument("checkpoints must be strictly increasing");
    }
}

// Runs body(round) for every round on up to `threads` workers.
template <class Body>
void for_each_round(std::size_t rounds, std::size_t threads, Body&& body) {
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min(threads, rounds);
    if (threads <= 1) {
        for (std::size_t i = 0; i < rounds; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < rounds; i = next++) {
                body(i);
            }
        });
    }
}

} // namespace detail

/// Runs `rounds` independent solver runs (round i seeded by
/// round_seed(cfg.seed, i)) and averages both error metrics at each
/// checkpoint. Rounds run on `threads` workers (0 = hardware concurrency);
/// the result does not depend on the thread count.
inline TrajectoryTable run_rounds(const HyperlinkGraph& g, const SolverConfig& cfg, std::size_t rounds,
                                  const std::vector<std::size_t>& checkpoints, std::size_t threads = 0) {
    cfg.validate();
    if (rounds == 0) {
        throw std::invalid_argument("rounds must be at least 1");
    }
    detail::require_increasing(checkpoints);
    const auto sol = solve_dense(g, cfg.alpha);
    const auto report = spectral_rate(g, cfg.alpha);
    const auto n = g.size();
    const auto inv_n = 1.0 / static_cast<double>(n);
    const auto cps = checkpoints.size();

    // per_round[round * cps + c] = {err, res}
    std::vector<std::pair<double, double>> per_round(rounds * cps);
    detail::for_each_round(rounds, threads, [&](std::size_t round) {
        auto state = init_state(g, cfg.alpha);
        PageSampler sample(round_seed(cfg.seed, round), n);
        for (std::size_t c = 0; c < cps; ++c) {
            while (state.t < checkpoints[c]) {
                step(state, g, cfg.alpha, sample());
            }
            per_round[round * cps + c] = {inv_n * squared_error(state.x, sol), squared_norm(state.r)};
        }
    });

    TrajectoryTable table;
    table.rows.resize(cps);
    for (std::size_t c = 0; c < cps; ++c) {
        double err = 0.0;
        double res = 0.0;
        for (std::size_t round = 0; round < rounds; ++round) {
            err += per_round[round * cps + c].first;
            res += per_round[round * cps + c].second;
        }
        auto& row = table.rows[c];
        row.t = checkpoints[c];
        row.mean_err = err / static_cast<double>(rounds);
        row.mean_res = res / static_cast<double>(rounds);
        row.residual_bound = residual_bound(report, row.t);
        row.error_bound = error_bound(report, row.t) * inv_n;
    }
    return table;
}

/// Mean of ||s_t - (1/n) 1||^2 over `runs` size-estimation runs at each
/// checkpoint, plus the final iterate of every run.
struct SizeTrajectory {
    std::vector<std::size_t> t;
    std::vector<double> mean_err;
    std::vector<SizeState> finals;
};

inline SizeTrajectory run_size_rounds(const HyperlinkGraph& g, std::uint64_t seed, std::size_t runs,
                                      const std::vector<std::size_t>& checkpoints, std::size_t threads = 0) {
    require_strongly_connected(g);
    if (runs == 0) {
        throw std::invalid_argument("runs must be at least 1");
    }
    detail::require_increasing(checkpoints);
    const auto cps = checkpoints.size();
    std::vector<double> per_run(runs * cps);
    SizeTrajectory out;
    out.t = checkpoints;
    out.finals.resize(runs);
    detail::for_each_round(runs, threads, [&](std::size_t run) {
        auto st = init_size_state(g);
        PageSampler sample(round_seed(seed, run), g.size());
        for (std::size_t c = 0; c < cps; ++c) {
            while (st.t < checkpoints[c]) {
                size_step(st, g, sample());
            }
            per_run[run * cps + c] = size_error(st);
        }
        out.finals[run] = std::move(st);
    });
    out.mean_err.assign(cps, 0.0);
    for (std::size_t c = 0; c < cps; ++c) {
        for (std::size_t run = 0; run < runs; ++run) {
            out.mean_err[c] += per_run[run * cps + c];
        }
        out.mean_err[c] /= static_cast<double>(runs);
    }
    return out;
}

inline constexpr const char* kTrajectoryHeader = "t,mean_err,mean_res,residual_bound,error_bound";

inline void export_csv(const TrajectoryTable& table, std::ostream& out) {
    const auto old_precision = out.precision(17);
    out << kTrajectoryHeader << '\n';
    for (const auto& row : table.rows) {
        out << row.t << ',' << row.mean_err << ',' << row.mean_res << ',' << row.residual_bound << ','
            << row.error_bound << '\n';
    }
    out.precision(old_precision);
}

inline std::string export_csv(const TrajectoryTable& table) {
    std::ostringstream out;
    export_csv(table, out);
    return out.str();
}

inline TrajectoryTable parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kTrajectoryHeader) {
        throw std::runtime_error("trajectory CSV: missing or unexpected header");
    }
    TrajectoryTable table;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        TrajectoryRow row;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        auto field = [&](auto& value, bool last) {
            auto [ptr, ec] = std::from_chars(p, end, value);
            if (ec != std::errc{} || (last ? ptr != end : (ptr == end || *ptr != ','))) {
                throw std::runtime_error("trajectory CSV: malformed row '" + line + "'");
            }
            p = last ? ptr : ptr + 1;
        };
        field(row.t, false);
        field(row.mean_err, false);
        field(row.mean_res, false);
        field(row.residual_bound, false);
        field(row.error_bound, true);
        table.rows.push_back(row);
    }
    return table;
}

inline TrajectoryTable parse_csv(const std::string& text) {
    std::istringstream in(text);
    return parse_csv(in);
}

} // namespace mppr

#endif
