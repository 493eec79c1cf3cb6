#pragma once

#include <stdexcept>
#include <string>

namespace wavenet {

// Bad argument value (non-positive width, empty signal, empty class).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Caller broke a shape or indexing contract.
struct ContractError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed file contents.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A documented invariant was found violated at runtime.
struct InvariantError : std::logic_error {
  using std::logic_error::logic_error;
};

// Non-finite loss or gradient.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace wavenet
