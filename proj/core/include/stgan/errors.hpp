#pragma once

#include <stdexcept>
#include <string>

namespace stgan {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input failed a schema or domain invariant. CLI exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A required upstream file does not exist. CLI exit code 2.
class MissingArtifactError : public Error {
 public:
  explicit MissingArtifactError(std::string path)
      : Error("missing artifact: " + path), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Non-finite value, singular system or degenerate statistic. CLI exit code 3.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace stgan
