#pragma once

#include <stdexcept>
#include <string>

namespace qvalued {

// Base of every error thrown by the library. The CLI maps the concrete
// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Points of different dimension, or values living in different spaces.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Two QPoints with different Q.
class QMismatch : public Error {
 public:
  using Error::Error;
};

// A scalar argument outside its admissible range (geodesic parameter,
// ball radius, negative tolerance, ...).
class ParameterRange : public Error {
 public:
  using Error::Error;
};

// Malformed or otherwise unusable input (empty lists, bad JSON, unknown
// fixture names).
class InputError : public Error {
 public:
  using Error::Error;
};

// A computation would exceed a configured size cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

// The sampled function does not respect the Lipschitz budget assumed by
// the extension construction.
class BudgetViolation : public Error {
 public:
  using Error::Error;
};

// Branch continuation around a loop cannot be resolved at the requested
// step count.
class ContinuationAmbiguity : public Error {
 public:
  using Error::Error;
};

}  // namespace qvalued
