#pragma once

#include <stdexcept>
#include <string>

namespace gsq {

/// Input outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Model failed a structural validity check (integrability, monotonicity, ...).
class ModelValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed to converge or detected an ill-posed profile.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Request exceeds a hard resource guard (e.g. dense-sampler size limit).
class CapacityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace gsq
