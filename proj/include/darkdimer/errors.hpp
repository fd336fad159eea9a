#pragma once

#include <stdexcept>
#include <string>

namespace darkdimer {

// Bad argument values: out-of-range sites, mismatched dimensions, bad ranges.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A documented precondition of an operation does not hold (wrong regime,
// non-minimal bath, geometry that does not satisfy a pairing condition).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A derived quantity that has no finite value for the given inputs.
class UndefinedValueError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A state failed the Hermiticity / trace / positivity / norm checks.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Integration went unstable (positivity lost beyond tolerance).
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested object would be too large for dense storage.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace darkdimer
