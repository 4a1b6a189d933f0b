#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spectra {

/// Caller broke a documented precondition (dimension mismatch, zero vector, ...).
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed input file; carries the 1-based line number where parsing stopped.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// An iterative kernel failed: non-convergence, NaN, breakdown of a quadrature.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what, std::ptrdiff_t index = -1)
        : std::runtime_error(what), index_(index) {}

    /// Step, eigenvalue or sample index the failure is attributed to; -1 if none.
    std::ptrdiff_t index() const noexcept { return index_; }

private:
    std::ptrdiff_t index_;
};

/// H_k has a (numerically) singular eigenvector matrix, so the Arnoldi rule is undefined.
class QuadratureBreakdown : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// No exact oracle applies to the requested problem.
class OracleRefusal : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace spectra
