#pragma once

#include <stdexcept>
#include <string>

namespace frao {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed arguments: dimension mismatch, asymmetric input, negative weight, ...
struct InvalidInput : Error {
    explicit InvalidInput(const std::string& msg) : Error(msg) {}
};

// Point outside the open domain of a family/chart (sigma <= 0, non-SPD scale, ...).
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// A family was asked for an operation it did not declare.
struct CapabilityError : Error {
    explicit CapabilityError(const std::string& msg) : Error(msg) {}
};

// An iteration failed to converge or a guarded numerical condition was hit.
struct NumericalFailure : Error {
    explicit NumericalFailure(const std::string& msg) : Error(msg) {}
};

// A guaranteed-approximation scheme could not meet its contract.
// Carries the best bracket found so the caller can inspect how close it got.
struct ApproximationFailure : Error {
    ApproximationFailure(const std::string& msg, double best_lower, double best_upper)
        : Error(msg), lower(best_lower), upper(best_upper) {}
    double lower;
    double upper;
};

}  // namespace frao
