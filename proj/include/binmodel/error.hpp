#pragma once

#include <stdexcept>
#include <string>

namespace binmodel {

// Bad input: malformed stimulus, parameter or data file. The CLI maps these to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Well-formed input for which the model has no answer. The CLI maps these to exit code 2.
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidStimulus : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidParameter : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DataError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DegenerateStimulus : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class NoThreshold : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class SensitivityInsufficient : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class UndefinedRSquared : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

}  // namespace binmodel
