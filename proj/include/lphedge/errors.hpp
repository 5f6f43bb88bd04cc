#ifndef LPHEDGE_ERRORS_HPP
#define LPHEDGE_ERRORS_HPP

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace lphedge {

/// Argument outside the mathematical domain of an operation
/// (non-positive price, fee factor outside (0, 1], inverted band, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Input data is well-formed but violates a model invariant
/// (duplicate quote, bid above ask, missing premium, ...).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based; 0 when not line-oriented.
class ParseError : public DataError {
public:
    ParseError(std::size_t line, const std::string& what)
        : DataError(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A payoff evaluator threw while being sampled by the grid oracle.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(double price, const std::string& what)
        : std::runtime_error("evaluation failed at price " + std::to_string(price) + ": " + what),
          price_(price) {}

    double price() const noexcept { return price_; }

private:
    double price_;
};

/// No strike pair in the chain satisfies the hedge budget.
/// `best_violation()` is the smallest amount by which the budget inequality
/// was exceeded, +inf when the chain had no admissible pair at all.
class InfeasibleError : public std::runtime_error {
public:
    InfeasibleError(const std::string& what, double best_violation)
        : std::runtime_error(what), best_violation_(best_violation) {}

    double best_violation() const noexcept { return best_violation_; }

private:
    double best_violation_ = std::numeric_limits<double>::infinity();
};

namespace detail {

inline void require_positive(double v, const char* name) {
    if (!(v > 0.0) || v == std::numeric_limits<double>::infinity())
        throw DomainError(std::string(name) + " must be finite and > 0, got " + std::to_string(v));
}

} // namespace detail

} // namespace lphedge

#endif // LPHEDGE_ERRORS_HPP
