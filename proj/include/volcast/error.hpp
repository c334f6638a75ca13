#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace volcast {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the 1-based line number of the offending row.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Input parsed but violates a domain invariant (non-positive price, duplicate date, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation (e.g. log of a non-positive price).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Series with zero dispersion where a scale is required.
class DegenerateSeriesError : public DomainError {
public:
    using DomainError::DomainError;
};

class RangeError : public Error {
public:
    using Error::Error;
};

/// Non-finite intermediate in a recursion; `index()` is the 0-based step that failed.
class NumericError : public Error {
public:
    NumericError(std::size_t index, const std::string& what)
        : Error("t=" + std::to_string(index) + ": " + what), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class EstimationError : public Error {
public:
    using Error::Error;
};

/// Optimizer stopped at its iteration cap. Holds the best parameter vector found
/// (natural parameterization, in the order reported by the fitting routine).
class ConvergenceError : public EstimationError {
public:
    ConvergenceError(const std::string& what, std::vector<double> best, double best_loglik)
        : EstimationError(what), best_(std::move(best)), best_loglik_(best_loglik) {}

    const std::vector<double>& best_params() const noexcept { return best_; }
    double best_loglik() const noexcept { return best_loglik_; }

private:
    std::vector<double> best_;
    double best_loglik_;
};

class AlignmentError : public Error {
public:
    using Error::Error;
};

}  // namespace volcast
