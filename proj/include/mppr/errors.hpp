#ifndef MPPR_ERRORS_HPP
#define MPPR_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mppr {

/// Malformed or invalid graph input. Maps to CLI exit code 1.
class GraphError : public std::runtime_error {
public:
    enum class Kind { DanglingPage, IndexOutOfRange, DuplicateEdge, MalformedLine };

    GraphError(Kind kind, std::string what, std::size_t line = 0)
        : std::runtime_error(std::move(what)), kind_(kind), line_(line) {}

    Kind kind() const noexcept { return kind_; }

    /// 1-based source line for parse errors, 0 when not applicable.
    std::size_t line() const noexcept { return line_; }

private:
    Kind kind_;
    std::size_t line_;
};

/// An operation was invoked on an input that violates its precondition
/// (non strongly connected graph, oracle size limit, unconverged iterate).
/// Maps to CLI exit code 2.
class PreconditionError : public std::runtime_error {
public:
    enum class Kind { NotStronglyConnected, TooLargeForDense, NonPositiveEntry };

    PreconditionError(Kind kind, std::string what)
        : std::runtime_error(std::move(what)), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Numerical failure of a dense reference computation.
class NumericalError : public std::runtime_error {
public:
    enum class Kind { SingularSystem, NoConvergence, InvariantViolated };

    NumericalError(Kind kind, std::string what)
        : std::runtime_error(std::move(what)), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

} // namespace mppr

#endif
