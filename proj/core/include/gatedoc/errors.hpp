#pragma once

#include <stdexcept>
#include <string>

namespace gatedoc {

// Error families map onto CLI exit codes: usage -> 1, data/io -> 2, internal -> 3.

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public DataError {
 public:
  using DataError::DataError;
};

class CheckpointError : public DataError {
 public:
  using DataError::DataError;
};

class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Shape or width disagreement between operands. Always a programming or
/// configuration fault once a config has been validated.
class DimensionError : public InternalError {
 public:
  using InternalError::InternalError;
};

/// Non-finite loss or gradient during training.
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gatedoc
