#pragma once

#include <stdexcept>
#include <string>

namespace ulab {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent input: bad JSON, invalid measure data,
/// parameter domain violations, unusable brackets.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(what) {}
};

/// A numerical procedure failed to meet its tolerance: quadrature
/// non-convergence, map-inversion failure, window-too-small.
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(what) {}
};

/// A witness search came up empty (the measure looks unimodal at the
/// requested time, or the evidence margin is below the certification floor).
class NoWitnessError : public Error {
public:
    explicit NoWitnessError(const std::string& what) : Error(what) {}
};

} // namespace ulab
