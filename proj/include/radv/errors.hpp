#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace radv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A domain invariant was violated. The message names the invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Malformed scenario document.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(what), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Value iteration hit its iteration budget before reaching the tolerance.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, std::size_t iterations, double residual)
        : Error(what), iterations_(iterations), residual_(residual) {}

    std::size_t iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    std::size_t iterations_;
    double residual_;
};

/// Transition structure is not a valid Markov chain, or the grid cannot be built.
class InvalidProcess : public Error {
public:
    using Error::Error;
};

/// A recognition curve failed its sampled monotonicity / range check.
class CurveError : public Error {
public:
    using Error::Error;
};

/// The shift-stability check was asked to run outside its hypotheses.
class HypothesisViolation : public Error {
public:
    using Error::Error;
};

class NoFixedPointFound : public Error {
public:
    using Error::Error;
};

namespace detail {

inline void require(bool condition, const std::string& invariant) {
    if (!condition) throw ValidationError(invariant);
}

} // namespace detail

} // namespace radv
