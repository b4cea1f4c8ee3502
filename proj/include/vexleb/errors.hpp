#pragma once

#include <stdexcept>
#include <string>

namespace vexleb {

// Region outside the grid, grid mismatch, zero-mass node, ...
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operation parameter outside its admissible window.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Exponent value not in (1, inf) (or an order not in [0, 1)).
class ExponentRangeError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

// 1-D operator handed a 2-D function or vice versa.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Requested level / mass not reachable on the truncated domain.
class RangeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Requested scale finer than the grid can represent.
class ResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A driver's hypothesis failed (e.g. a weight condition is not finite).
class InapplicableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonconvergenceError : public std::runtime_error {
public:
    NonconvergenceError(const std::string& what, double lo, double hi)
        : std::runtime_error(what), lo_(lo), hi_(hi) {}

    double bracket_lo() const { return lo_; }
    double bracket_hi() const { return hi_; }

private:
    double lo_;
    double hi_;
};

} // namespace vexleb
