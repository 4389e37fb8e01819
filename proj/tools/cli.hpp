#ifndef MPPR_TOOLS_CLI_HPP
#define MPPR_TOOLS_CLI_HPP

// Command-line front end. Exit codes: 0 success, 1 input or format error,
// 2 precondition or numerical failure.

#include <array>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mppr/mppr.hpp"

namespace mppr::cli {

/// Shortest round-trip decimal, with ".0" appended to integral values.
inline std::string format_real(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    std::string s(buf.data(), ptr);
    if (s.find_first_of(".eEn") == std::string::npos) {
        s += ".0";
    }
    return s;
}

inline void write_vector(std::ostream& out, const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        out << i << ' ' << format_real(v[i]) << '\n';
    }
}

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline HyperlinkGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open graph file '" + path + "'");
    }
    return parse_graph(in);
}

// Sink that writes to a file when a path is given and to `fallback` otherwise.
class Output {
public:
    Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) {
                throw InputError("cannot open output file '" + path + "'");
            }
            stream_ = file_.get();
        }
    }

    std::ostream& get() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

inline void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InputError("--alpha must lie in (0, 1)");
    }
}

struct Options {
    std::size_t n = 0;
    double threshold = 0.5;
    std::uint64_t seed = 0;
    std::string out;
    std::string graph;
    double alpha = 0.85;
    std::optional<std::size_t> iters;
    std::optional<double> tol;
    std::string traj;
    std::string method = "dense";
    std::size_t max_iters = 100000;
    std::size_t rounds = 100;
    std::size_t threads = 0;
};

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Distributed matching-pursuit PageRank toolkit"};
    app.require_subcommand(1);
    Options o;

    auto* gen = app.add_subcommand("gen", "Generate a thresholded random hyperlink graph");
    gen->add_option("--n", o.n, "Number of pages")->required();
    gen->add_option("--threshold", o.threshold, "Link kept when Uniform[0,1) >= threshold")->capture_default_str();
    gen->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    gen->add_option("--out", o.out, "Output graph file (default: stdout)");

    auto* solve = app.add_subcommand("solve", "Run the randomized matching-pursuit solver");
    solve->add_option("--graph", o.graph, "Graph file")->required();
    solve->add_option("--alpha", o.alpha, "Damping factor")->capture_default_str();
    solve->add_option("--iters", o.iters, "Number of update steps");
    solve->add_option("--tol", o.tol, "Stop once ||r||^2 <= tol");
    solve->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    solve->add_option("--traj", o.traj, "Write per-step (t, ||r_t||^2) CSV here");
    solve->add_option("--out", o.out, "Output vector file (default: stdout)");

    auto* oracle = app.add_subcommand("oracle", "Dense reference PageRank");
    oracle->add_option("--graph", o.graph, "Graph file")->required();
    oracle->add_option("--alpha", o.alpha, "Damping factor")->capture_default_str();
    oracle->add_option("--method", o.method, "dense or power")
        ->check(CLI::IsMember({"dense", "power"}))
        ->capture_default_str();
    oracle->add_option("--tol", o.tol, "Power iteration l1 tolerance (default 1e-12)");
    oracle->add_option("--max-iters", o.max_iters, "Power iteration limit")->capture_default_str();
    oracle->add_option("--out", o.out, "Output vector file (default: stdout)");

    auto* spectral = app.add_subcommand("spectral", "Smallest singular value and decay rate");
    spectral->add_option("--graph", o.graph, "Graph file")->required();
    spectral->add_option("--alpha", o.alpha, "Damping factor")->capture_default_str();

    auto* experiment = app.add_subcommand("experiment", "Averaged error trajectories as CSV");
    experiment->add_option("--graph", o.graph, "Graph file")->required();
    experiment->add_option("--alpha", o.alpha, "Damping factor")->capture_default_str();
    experiment->add_option("--rounds", o.rounds, "Independent runs to average")->capture_default_str();
    experiment->add_option("--iters", o.iters, "Horizon (default 20n); 21 evenly spaced checkpoints");
    experiment->add_option("--seed", o.seed, "Base random seed")->capture_default_str();
    experiment->add_option("--threads", o.threads, "Worker threads (0 = all cores)")->capture_default_str();
    experiment->add_option("--out", o.out, "Output CSV (default: stdout)");

    auto* size = app.add_subcommand("size", "Estimate the network size");
    size->add_option("--graph", o.graph, "Graph file")->required();
    size->add_option("--iters", o.iters, "Number of projection steps")->required();
    size->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    size->add_option("--traj", o.traj, "Write per-step (t, ||s_t - 1/n||^2) CSV here");
    size->add_option("--out", o.out, "Output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (gen->parsed()) {
            if (o.n == 0) {
                throw InputError("--n must be at least 1");
            }
            if (!(o.threshold >= 0.0 && o.threshold <= 1.0)) {
                throw InputError("--threshold must lie in [0, 1]");
            }
            const auto g = generate_synthetic(o.n, o.threshold, o.seed);
            Output sink(o.out, out);
            serialize_graph(g, sink.get());
        } else if (solve->parsed()) {
            check_alpha(o.alpha);
            if (!o.iters && !o.tol) {
                throw InputError("solve needs --iters, --tol or both");
            }
            if (o.tol && !(*o.tol >= 0.0)) {
                throw InputError("--tol must be non-negative");
            }
            const auto g = load_graph(o.graph);
            SolverConfig cfg;
            cfg.alpha = o.alpha;
            cfg.seed = o.seed;
            cfg.max_iters = o.iters.value_or(std::numeric_limits<std::size_t>::max());
            cfg.stop_tol = o.tol;
            std::unique_ptr<Output> traj;
            if (!o.traj.empty()) {
                traj = std::make_unique<Output>(o.traj, out);
                traj->get().precision(17);
                traj->get() << "t,res_norm_sq\n";
            }
            auto state = init_state(g, cfg);
            if (traj) {
                traj->get() << 0 << ',' << squared_norm(state.r) << '\n';
                run(state, g, cfg, [&](std::size_t t, double res) { traj->get() << t << ',' << res << '\n'; });
            } else {
                run(state, g, cfg, [](std::size_t, double) {});
            }
            Output sink(o.out, out);
            write_vector(sink.get(), state.x);
        } else if (oracle->parsed()) {
            check_alpha(o.alpha);
            const auto g = load_graph(o.graph);
            const auto sol = o.method == "power"
                                 ? power_iteration_pagerank(g, o.alpha, o.tol.value_or(1e-12), o.max_iters)
                                 : solve_dense(g, o.alpha);
            Output sink(o.out, out);
            write_vector(sink.get(), sol.x_star);
        } else if (spectral->parsed()) {
            check_alpha(o.alpha);
            const auto rep = spectral_rate(load_graph(o.graph), o.alpha);
            out << "sigma_min " << format_real(rep.sigma_min) << '\n'
                << "rate " << format_real(rep.rate) << '\n'
                << "r0_norm_sq " << format_real(rep.r0_norm_sq) << '\n';
        } else if (experiment->parsed()) {
            check_alpha(o.alpha);
            if (o.rounds == 0) {
                throw InputError("--rounds must be at least 1");
            }
            const auto g = load_graph(o.graph);
            const auto horizon = o.iters.value_or(20 * g.size());
            auto checkpoints = even_checkpoints(std::max<std::size_t>(1, horizon / 20), 21);
            while (!checkpoints.empty() && checkpoints.back() > horizon) {
                checkpoints.pop_back();
            }
            if (checkpoints.back() != horizon) {
                checkpoints.push_back(horizon);
            }
            SolverConfig cfg;
            cfg.alpha = o.alpha;
            cfg.seed = o.seed;
            const auto table = run_rounds(g, cfg, o.rounds, checkpoints, o.threads);
            Output sink(o.out, out);
            export_csv(table, sink.get());
        } else if (size->parsed()) {
            const auto g = load_graph(o.graph);
            require_strongly_connected(g);
            std::unique_ptr<Output> traj;
            if (!o.traj.empty()) {
                traj = std::make_unique<Output>(o.traj, out);
                traj->get().precision(17);
                traj->get() << "t,err_norm_sq\n";
            }
            auto st = init_size_state(g);
            PageSampler sample(o.seed, g.size());
            if (traj) {
                traj->get() << 0 << ',' << size_error(st) << '\n';
                run_size(st, g, *o.iters, sample,
                         [&](std::size_t t, double e) { traj->get() << t << ',' << e << '\n'; });
            } else {
                run_size(st, g, *o.iters, sample, [](std::size_t, double) {});
            }
            Output sink(o.out, out);
            for (std::size_t i = 0; i < st.s.size(); ++i) {
                sink.get() << i << ' ' << format_real(st.s[i]) << ' '
                           << (st.s[i] > 0.0 ? format_real(estimate_size(st, i)) : std::string("-")) << '\n';
            }
        }
    } catch (const PreconditionError& e) {
        err << "error: precondition failed: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        err << "error: numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const GraphError& e) {
        err << "error: invalid graph: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace mppr::cli

#endif
