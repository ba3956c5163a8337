#pragma once

#include <stdexcept>
#include <string>

namespace intermed {

/// Argument outside the mathematical domain of an operation (negative quality, non-positive cost).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numeric solve failed to meet its tolerance. The message carries the last bracket.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller violated a documented precondition (parameter ranges, model family restrictions).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Invalid oracle or sweep configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace intermed
