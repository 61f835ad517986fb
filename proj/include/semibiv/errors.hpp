#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace semibiv {

// Argument outside the support or domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A model definition that cannot describe a survival function
// (negative hazard, bad parameters, mismatched supports, ...).
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A numerical procedure failed to converge. Carries the sampled values
// that led to the failure so callers can report them.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what, std::vector<double> samples = {})
        : std::runtime_error(what), samples_(std::move(samples)) {}

    const std::vector<double>& samples() const noexcept { return samples_; }

private:
    std::vector<double> samples_;
};

class DecompositionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SamplerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace semibiv
