#pragma once

#include <stdexcept>
#include <string>

namespace rydberg {

// Bad or missing input data (species tables, configs, CLI arguments).
class ConfigurationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Arguments outside the physical domain of a routine.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Base for failures of a numerical method on valid input.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IntegrationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class FitQualityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace rydberg
