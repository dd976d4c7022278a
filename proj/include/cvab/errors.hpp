#pragma once

#include <stdexcept>
#include <string>

namespace cvab {

/// Bad input: parameters, shapes or indices the caller got wrong. CLI exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation could not be carried out reliably. CLI exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class PartitionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class PatternError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class IndexError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class CapacityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class UnsupportedError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class AboveThresholdError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DegenerateVarianceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularCovarianceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StepSizeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace cvab
