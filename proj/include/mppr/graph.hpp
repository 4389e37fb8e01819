#ifndef MPPR_GRAPH_HPP
#define MPPR_GRAPH_HPP

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mppr/errors.hpp"

namespace mppr {

using PageIndex = std::size_t;

/// Directed hyperlink graph over pages 0..n-1, stored as out-links only.
///
/// Page j linking to page i contributes A(i,j) = 1/N_j to the implicit
/// column-stochastic hyperlink matrix A. Every page has at least one out-link,
/// and each out-link list is sorted and duplicate free. Immutable once built.
class HyperlinkGraph {
public:
    /// Builds a graph from per-page out-link lists (any order).
    /// Throws GraphError on dangling pages, out-of-range targets or duplicates.
    HyperlinkGraph(std::size_t n, std::vector<std::vector<PageIndex>> out_links)
        : n_(n) {
        if (n == 0) {
            throw GraphError(GraphError::Kind::MalformedLine, "graph must have at least one page");
        }
        if (out_links.size() != n) {
            throw GraphError(GraphError::Kind::IndexOutOfRange,
                             "out-link table has " + std::to_string(out_links.size()) +
                                 " rows, expected " + std::to_string(n));
        }
        offsets_.reserve(n + 1);
        offsets_.push_back(0);
        for (PageIndex k = 0; k < n; ++k) {
            auto& links = out_links[k];
            if (links.empty()) {
                throw GraphError(GraphError::Kind::DanglingPage,
                                 "page " + std::to_string(k) + " has no out-links");
            }
            std::sort(links.begin(), links.end());
            if (links.back() >= n) {
                throw GraphError(GraphError::Kind::IndexOutOfRange,
                                 "link " + std::to_string(k) + " -> " + std::to_string(links.back()) +
                                     " targets a page outside [0, " + std::to_string(n) + ")");
            }
            if (auto dup = std::adjacent_find(links.begin(), links.end()); dup != links.end()) {
                throw GraphError(GraphError::Kind::DuplicateEdge,
                                 "duplicate link " + std::to_string(k) + " -> " + std::to_string(*dup));
            }
            targets_.insert(targets_.end(), links.begin(), links.end());
            offsets_.push_back(targets_.size());
        }
    }

    std::size_t size() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return targets_.size(); }

    /// Sorted out-link targets of page k.
    std::span<const PageIndex> out_links(PageIndex k) const noexcept {
        return {targets_.data() + offsets_[k], offsets_[k + 1] - offsets_[k]};
    }

    std::size_t out_degree(PageIndex k) const noexcept { return offsets_[k + 1] - offsets_[k]; }

    bool has_self_loop(PageIndex k) const noexcept {
        auto links = out_links(k);
        return std::binary_search(links.begin(), links.end(), k);
    }

    /// A(k,k): 1/N_k with a self-loop, 0 otherwise.
    double self_weight(PageIndex k) const noexcept {
        return has_self_loop(k) ? 1.0 / static_cast<double>(out_degree(k)) : 0.0;
    }

    friend bool operator==(const HyperlinkGraph&, const HyperlinkGraph&) = default;

private:
    std::size_t n_;
    std::vector<std::size_t> offsets_;
    std::vector<PageIndex> targets_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\f\v");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\f\v");
    return s.substr(first, last - first + 1);
}

// Splits on blanks and parses each token as an unsigned integer.
inline bool parse_uints(std::string_view line, std::vector<std::uint64_t>& out) {
    out.clear();
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) {
            ++pos;
        }
        if (pos == line.size()) {
            break;
        }
        std::uint64_t value = 0;
        auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + line.size(), value);
        if (ec != std::errc{}) {
            return false;
        }
        pos = static_cast<std::size_t>(ptr - line.data());
        if (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') {
            return false;
        }
        out.push_back(value);
    }
    return true;
}

} // namespace detail

/// Reads the text graph format: the page count N on the first data line,
/// then one "u v" line per hyperlink u -> v. Lines beginning with '#' are
/// comments and blank lines are skipped.
inline HyperlinkGraph parse_graph(std::istream& in) {
    std::string raw;
    std::size_t line_no = 0;
    std::size_t n = 0;
    bool have_header = false;
    std::vector<std::vector<PageIndex>> links;
    std::vector<std::uint64_t> fields;

    const auto malformed = [&](const std::string& why) {
        return GraphError(GraphError::Kind::MalformedLine,
                          "line " + std::to_string(line_no) + ": " + why, line_no);
    };

    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = detail::trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        if (!detail::parse_uints(line, fields)) {
            throw malformed("expected non-negative integers, got '" + std::string(line) + "'");
        }
        if (!have_header) {
            if (fields.size() != 1) {
                throw malformed("expected the page count");
            }
            if (fields[0] == 0) {
                throw malformed("page count must be positive");
            }
            n = static_cast<std::size_t>(fields[0]);
            links.resize(n);
            have_header = true;
            continue;
        }
        if (fields.size() != 2) {
            throw malformed("expected 'source target'");
        }
        const auto from = fields[0];
        const auto to = fields[1];
        if (from >= n || to >= n) {
            throw GraphError(GraphError::Kind::IndexOutOfRange,
                             "line " + std::to_string(line_no) + ": link " + std::to_string(from) +
                                 " -> " + std::to_string(to) + " outside [0, " + std::to_string(n) + ")",
                             line_no);
        }
        auto& out = links[from];
        if (std::find(out.begin(), out.end(), to) != out.end()) {
            throw GraphError(GraphError::Kind::DuplicateEdge,
                             "line " + std::to_string(line_no) + ": duplicate link " +
                                 std::to_string(from) + " -> " + std::to_string(to),
                             line_no);
        }
        out.push_back(static_cast<PageIndex>(to));
    }
    if (!have_header) {
        throw GraphError(GraphError::Kind::MalformedLine, "missing page count");
    }
    return HyperlinkGraph(n, std::move(links));
}

inline HyperlinkGraph parse_graph(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_graph(in);
}

inline void serialize_graph(const HyperlinkGraph& g, std::ostream& out) {
    out << g.size() << '\n';
    for (PageIndex k = 0; k < g.size(); ++k) {
        for (auto target : g.out_links(k)) {
            out << k << ' ' << target << '\n';
        }
    }
}

inline std::string serialize_graph(const HyperlinkGraph& g) {
    std::ostringstream out;
    serialize_graph(g, out);
    return out.str();
}

/// Random graph where each ordered pair (j, i), self pairs included, carries
/// the link j -> i iff a Uniform[0,1) draw is >= threshold. Pages left without
/// out-links receive one uniformly random link drawn from the same stream.
inline HyperlinkGraph generate_synthetic(std::size_t n, double threshold, std::uint64_t seed) {
    if (n == 0) {
        throw std::invalid_argument("generate_synthetic: n must be positive");
    }
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw std::invalid_argument("generate_synthetic: threshold must lie in [0, 1]");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::vector<PageIndex>> links(n);
    for (PageIndex j = 0; j < n; ++j) {
        for (PageIndex i = 0; i < n; ++i) {
            if (unit(rng) >= threshold) {
                links[j].push_back(i);
            }
        }
    }
    std::uniform_int_distribution<PageIndex> pick(0, n - 1);
    for (auto& out : links) {
        if (out.empty()) {
            out.push_back(pick(rng));
        }
    }
    return HyperlinkGraph(n, std::move(links));
}

namespace detail {

inline std::size_t count_reachable(std::size_t n, const std::vector<std::vector<PageIndex>>& adj) {
    std::vector<char> seen(n, 0);
    std::vector<PageIndex> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        const auto u = stack.back();
        stack.pop_back();
        for (auto v : adj[u]) {
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
                stack.push_back(v);
            }
        }
    }
    return count;
}

} // namespace detail

/// True iff every page reaches every other page along directed links.
inline bool is_strongly_connected(const HyperlinkGraph& g) {
    const auto n = g.size();
    std::vector<std::vector<PageIndex>> forward(n), backward(n);
    for (PageIndex u = 0; u < n; ++u) {
        for (auto v : g.out_links(u)) {
            forward[u].push_back(v);
            backward[v].push_back(u);
        }
    }
    return detail::count_reachable(n, forward) == n && detail::count_reachable(n, backward) == n;
}

} // namespace mppr

#endif
