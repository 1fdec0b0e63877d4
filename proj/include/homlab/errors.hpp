// errors.hpp: exception types thrown across homlab

#pragma once

#include <stdexcept>
#include <string>

namespace homlab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A constructed value violates one of its type invariants.
struct InvariantViolation : Error {
    using Error::Error;
};

// Physical units were requested but the physical scale (sigma) is missing.
struct UnitConversionError : Error {
    using Error::Error;
};

// Conditioning on an outcome whose probability is (numerically) zero.
struct UndefinedStateError : Error {
    explicit UndefinedStateError(const std::string& what, double probability = 0.0)
        : Error(what), probability(probability) {}
    double probability;
};

// Inputs fall outside the assumptions a closed form was derived under.
struct ContractViolation : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct NoFitError : Error {
    using Error::Error;
};

struct DegenerateDistributionError : Error {
    using Error::Error;
};

}  // namespace homlab
