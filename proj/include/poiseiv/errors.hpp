#pragma once

#include <stdexcept>

namespace poiseiv {

/// Base class for library-specific failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// MGF/CGF argument outside its finiteness interval, or a slope outside the
/// admissible region of a law pair.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A linear predictor exceeded the safe exponent bound; exp() would leave
/// the double range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Every count is zero; the score equation has no finite intercept root.
class AllZeroCountsError : public Error {
 public:
  using Error::Error;
};

/// The target value lies outside the attainable range of the monotone
/// function being inverted.
class NoRootError : public Error {
 public:
  using Error::Error;
};

/// Moment-method estimation produced a non-positive implied variance or
/// shape.
class DegenerateMomentError : public Error {
 public:
  using Error::Error;
};

/// Invalid simulation configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text (CSV, law spec, scenario file).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Monte Carlo run aborted (too many failed replications).
class SimulationError : public Error {
 public:
  using Error::Error;
};

}  // namespace poiseiv
