#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace resopt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The discretization does not resolve the coefficients of the problem.
class AssemblyError : public Error {
public:
    using Error::Error;
};

/// Exhaustive search would exceed the desk-scale limits.
class SizeError : public Error {
public:
    using Error::Error;
};

/// A bracketing scan found no sign change. Carries the probed samples
/// (abscissa, function value) so callers can report them.
class BracketError : public Error {
public:
    BracketError(const std::string& what, std::vector<std::pair<double, double>> samples)
        : Error(what), samples_(std::move(samples)) {}

    const std::vector<std::pair<double, double>>& samples() const noexcept { return samples_; }

private:
    std::vector<std::pair<double, double>> samples_;
};

/// Numerical rank of a small linear system is too low to extract a kernel vector.
class RankError : public Error {
public:
    using Error::Error;
};

/// Invalid run configuration (CLI layer).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace resopt
