#pragma once

#include <stdexcept>
#include <string>

namespace chords {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (bad exponent,
// point outside the body, non-interior origin, ...).
struct DomainError : Error {
  using Error::Error;
};

// Structurally invalid body data: unbounded halfspace intersection,
// non-spanning vertex set, non-orthogonal rotation, unsorted axes.
struct RepresentationError : Error {
  using Error::Error;
};

// Geometry collapsed below the degeneracy tolerance.
struct DegeneracyError : Error {
  using Error::Error;
};

// Valid input that the implementation deliberately does not cover
// (e.g. polytopes in dimension >= 4).
struct UnsupportedError : Error {
  using Error::Error;
};

// An iterative solver exhausted its budget without reaching tolerance.
struct ConvergenceError : Error {
  using Error::Error;
};

// Malformed configuration (unknown keys, wrong types, missing fields).
struct ConfigError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace chords
