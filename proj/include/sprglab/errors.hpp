#pragma once

#include <stdexcept>
#include <string>

namespace sprglab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Inconsistent or out-of-range parameters.
struct ParameterError : Error {
    using Error::Error;
};

// A requested object exceeds a configured size cap.
struct ParameterTooLarge : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

// A quadratic form references indices outside the seed vector.
struct MalformedForm : Error {
    using Error::Error;
};

// Two outputs landed on the same (bucket, cell) pair.
struct MappingViolation : Error {
    using Error::Error;
};

// A sparse factorization was asked to absorb more nonzeros than its rank bound.
struct RankOverflow : Error {
    using Error::Error;
};

struct MalformedSeed : Error {
    using Error::Error;
};

// Corrupt or truncated artifact file.
struct ParseError : Error {
    using Error::Error;
};

} // namespace sprglab
