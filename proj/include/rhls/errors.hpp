#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rhls {

// Argument-validation failures use std::invalid_argument and std::domain_error
// directly. The types below cover the failure modes callers may want to
// distinguish.

/// A point too close to the south pole was passed to the inverse Cayley map.
class SouthPoleSingularity : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Dense assembly was asked for more nodes than the configured cap.
class ProblemTooLarge : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Zero norms or zero densities where a strictly positive input is required.
class DegenerateInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A Monte Carlo estimate did not reach its required relative standard error.
class InsufficientSamples : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Both or neither of the candidate closed forms matched the quadrature value.
class AmbiguousVerdict : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A non-finite value showed up where a finite one was required.
class NonFiniteValue : public std::runtime_error {
public:
    NonFiniteValue(const std::string& what, std::size_t index)
        : std::runtime_error(what + " (node " + std::to_string(index) + ")"), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

}  // namespace rhls
