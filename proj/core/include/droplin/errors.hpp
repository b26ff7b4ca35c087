#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace droplin {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operand shapes are incompatible with the requested operation.
struct DimensionMismatch : Error {
  using Error::Error;
};

// A routine that requires a symmetric input got a matrix whose
// asymmetry exceeds the stated tolerance.
struct NonSymmetric : Error {
  using Error::Error;
};

// A routine that requires a positive semidefinite input found an
// eigenvalue below the negative tolerance band.
struct NotPsd : Error {
  using Error::Error;
};

// An iteration hit its sweep cap before reaching its threshold.
struct NoConvergence : Error {
  using Error::Error;
};

// A stochastic run blew past the divergence guard.  step is the first
// recorded iterate at which the guard tripped.
struct Diverged : Error {
  Diverged(const std::string& what, long step_) : Error(what), step(step_) {}
  long step;
};

// A requested construction would exceed the configured size cap.
struct SizeOverflow : Error {
  using Error::Error;
};

// A point handed to a criticality-dependent check is not a critical
// point of the objective.
struct NotCritical : Error {
  using Error::Error;
};

// A saddle probe needs unequal column norms; this point has none.
struct AlreadyEqualized : Error {
  using Error::Error;
};

// Malformed matrix or trace file.
struct CsvError : Error {
  using Error::Error;
};

}  // namespace droplin
