#pragma once

#include <stdexcept>
#include <string>

namespace fda {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Mismatched vector/grid sizes.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Evaluation point outside the [0,1] domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Polynomial degree above the supported cap.
class DegreeError : public Error {
public:
    using Error::Error;
};

/// Invalid or insufficient knot configuration.
class KnotError : public Error {
public:
    using Error::Error;
};

/// Too few curves/samples for the requested operation.
class SampleError : public Error {
public:
    using Error::Error;
};

/// No admissible split candidate remains.
class SaturationError : public Error {
public:
    using Error::Error;
};

/// Input violates a documented precondition (asymmetry, non-orthonormal rows, ...).
class ContractError : public Error {
public:
    using Error::Error;
};

/// Covariance matrix could not be factorized even after jitter escalation.
class NotPsdError : public Error {
public:
    using Error::Error;
};

/// Grid resolution unsuitable for the requested operation.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// Index outside its valid range.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Malformed configuration file or CLI arguments.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace fda
