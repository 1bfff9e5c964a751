#pragma once

#include <stdexcept>
#include <string>

namespace cch {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bracket ladder did not reach full rank at some sample point.
struct HoermanderFailure : Error {
  using Error::Error;
};

struct DegenerateBasis : Error {
  using Error::Error;
};

// Evaluation requested at the gauge/fundamental-solution singularity.
struct Singularity : Error {
  using Error::Error;
};

struct ComparabilityViolation : Error {
  using Error::Error;
};

struct InconclusiveVolume : Error {
  using Error::Error;
};

struct NoPathFound : Error {
  using Error::Error;
};

struct NonConvergence : Error {
  using Error::Error;
};

struct DisconnectedDomain : Error {
  using Error::Error;
};

struct EmptyDomain : Error {
  using Error::Error;
};

struct NonFiniteWeight : Error {
  using Error::Error;
};

struct ZeroGradient : Error {
  using Error::Error;
};

// A maximized ratio exceeded its attached theoretical bound by more than the
// reporting tolerance; either a discretization artifact or a real violation.
struct AnomalousExcess : Error {
  using Error::Error;
};

struct ExponentViolation : Error {
  using Error::Error;
};

// A constructed cover failed one of its defining clauses; carries the clause.
struct PropertyViolation : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace cch
