#pragma once

#include <stdexcept>
#include <string>

namespace sfpca {

// Error hierarchy mirrored by the CLI exit codes:
//   InvalidArgument / ConfigError -> 2, DataError -> 3,
//   NumericError -> 4, IoError -> 5.

class InvalidArgument : public std::invalid_argument {
 public:
  explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

// Too few samples for the requested operation (n < 2 variances, n < K folds, ...).
class InsufficientData : public InvalidArgument {
 public:
  explicit InsufficientData(const std::string& what) : InvalidArgument(what) {}
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sfpca
