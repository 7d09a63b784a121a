#pragma once

#include <stdexcept>
#include <string>

namespace secrecy {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shape or dimension mismatch between operands.
struct DimensionError : Error {
  using Error::Error;
};

// Matrix is singular or indefinite where positive definiteness is required.
struct SingularMatrixError : Error {
  using Error::Error;
};

// Parameter outside its admissible range.
struct DomainError : Error {
  using Error::Error;
};

// Input file malformed or inconsistent.
struct ParseError : Error {
  using Error::Error;
};

// Numerical routine failed to reach its stated contract.
struct SolverError : Error {
  using Error::Error;
};

// A model-level invariant was violated (e.g. an enhancement ordering).
struct InvariantViolation : Error {
  using Error::Error;
};

// Filesystem failure.
struct IoError : Error {
  using Error::Error;
};

}  // namespace secrecy
