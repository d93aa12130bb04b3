#pragma once

#include <stdexcept>
#include <string>

namespace mrdcs {

// Error taxonomy shared across the library. The CLI maps these onto exit
// codes: configuration problems -> 1, data problems -> 2, run-wide numerical
// degeneracy -> 3.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Dimension or sample-count mismatch between inputs.
class ShapeError : public Error {
public:
    using Error::Error;
};

// Value outside the mathematical domain of an operation (non-finite cost,
// |rho| >= 1, n < 2, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// The request is well-formed but outside what the component supports
// (Sobol dimension beyond the loaded table, SIS on multivariate data).
class CapabilityError : public Error {
public:
    using Error::Error;
};

// Malformed input text (direction-number files, CSV cells, manifests).
class ParseError : public Error {
public:
    using Error::Error;
};

// Invalid or inconsistent configuration (unknown example id, bad rule spec).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Zero distance variance or an all-ties sample; screening converts this
// into a score of 0 with a warning, direct callers see the exception.
class DegenerateInput : public Error {
public:
    using Error::Error;
};

// Dataset-level failures: missing files, empty sample/feature intersection.
class IngestionError : public Error {
public:
    using Error::Error;
};

// Operating-system I/O failure while reading or writing artifacts.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace mrdcs
