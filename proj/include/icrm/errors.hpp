#pragma once

#include <stdexcept>

namespace icrm {

/// Raised for parameter values outside a model's domain.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a quantity has no closed form for the given model.
class UnsupportedAnalytics : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A model combination outside the hypotheses of the requested operation.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace icrm
