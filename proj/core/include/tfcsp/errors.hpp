#pragma once

#include <stdexcept>
#include <string>

namespace tfcsp {

// Base class for every error raised by the library. Callers that only care
// about success/failure can catch this; the subclasses let tests and the CLI
// distinguish the failure category.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or unsupported container bytes (bad magic, unknown version, truncation).
class FormatError : public Error {
 public:
  using Error::Error;
};

// A structurally valid object that violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Bad argument to an operation (empty list, n_features > N, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Filter design preconditions (band edges, order).
class DesignError : public Error {
 public:
  using Error::Error;
};

// Window/length/extent errors: STFT window longer than signal, crop outside trial, short epochs.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Band grid not covered by the spectrogram it is applied to.
class CoverageError : public Error {
 public:
  using Error::Error;
};

// Composite covariance still not positive definite after ridge repair.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

// All-zero trial, zero projected variance.
class DegenerateTrialError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

// Wraps a failure inside a pipeline stage; what() is "<stage>: <inner message>".
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& inner)
      : Error(stage + ": " + inner), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace tfcsp
