#pragma once

#include <stdexcept>
#include <string>

namespace compass {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A state whose norm vanishes (exact cancellation or collapsed centers).
class DegenerateStateError : public Error {
 public:
  using Error::Error;
};

/// Convergence, coverage, window or bracketing failures.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Bad arguments to a library call (geometry mismatch, invalid grids, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed or schema-violating run configuration. `path` names the field.
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace compass
