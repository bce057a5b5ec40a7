#pragma once

#include <stdexcept>
#include <string>

namespace cembed {

// Invalid parameters or preconditions.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Lag or index outside a tabulated range.
struct RangeError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// Lengths that do not fit together.
struct SizeError : std::length_error {
  using std::length_error::length_error;
};

// Internal consistency check failed (e.g. non-real eigenvalues).
struct IntegrityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input has no usable variance (all-zero spectrum, zero S^2, ...).
struct DegenerateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dense factorization of an indefinite matrix.
struct FactorizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File could not be read or written.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cembed
