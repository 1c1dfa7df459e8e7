#pragma once

#include <stdexcept>
#include <string>

namespace relsize {

/// Precondition violated by the caller (bad argument, broken invariant).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Bad command line or unknown configuration key.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Problem with external data: files, configs, predictions.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public DataError {
 public:
  using DataError::DataError;
};

class IoError : public DataError {
 public:
  IoError(const std::string& what, std::string path)
      : DataError(what + ": " + path), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class MissingFileError : public IoError {
 public:
  explicit MissingFileError(std::string path) : IoError("missing file", std::move(path)) {}
};

/// A file exists but does not follow the expected layout.
class FormatError : public DataError {
 public:
  using DataError::DataError;
};

class PfmHeaderError : public FormatError {
 public:
  using FormatError::FormatError;
};

/// Positive PFM scale (big-endian payload); only little-endian maps are accepted.
class PfmByteOrderError : public FormatError {
 public:
  using FormatError::FormatError;
};

/// Payload size does not match the header (truncated or trailing bytes).
class PfmPayloadError : public FormatError {
 public:
  using FormatError::FormatError;
};

class PngFormatError : public FormatError {
 public:
  using FormatError::FormatError;
};

}  // namespace relsize
