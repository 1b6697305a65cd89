#pragma once

#include <stdexcept>
#include <string>

namespace casimir {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
  using Error::Error;
};

// Argument inside the domain type but outside the representable/supported range.
struct RangeError : Error {
  using Error::Error;
};

// Evaluation requested at a point where the quantity diverges (e.g. Li1 at z = 1).
struct DivergenceError : DomainError {
  using DomainError::DomainError;
};

// Malformed input data; carries the 1-based line number of the offending line.
struct ParseError : Error {
  ParseError(const std::string& what, long line_no)
      : Error(what + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
  long line;
};

// Model cannot be evaluated in the requested regime (e.g. a smooth-window
// model on the imaginary axis, where its causal continuation is not defined).
struct UnsupportedModelError : Error {
  using Error::Error;
};

// Fresnel denominator vanished; only reachable with pathological permittivities.
struct SingularInterfaceError : Error {
  using Error::Error;
};

// Integrand hit a cavity-resonance pole (|1 - r^2 e^{i xi}| below tolerance).
struct ResonanceError : Error {
  using Error::Error;
};

// Quadrature failed to reach the requested tolerance; carries the best estimate.
struct AccuracyError : Error {
  AccuracyError(const std::string& what, double best, double err)
      : Error(what), best_estimate(best), error_estimate(err) {}
  double best_estimate;
  double error_estimate;
};

}  // namespace casimir
