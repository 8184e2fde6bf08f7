#pragma once

#include <stdexcept>
#include <string>

namespace ghost {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent experiment parameters. `key()` names the offending field.
class ConfigError : public Error {
public:
  ConfigError(std::string key, const std::string& what)
      : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

private:
  std::string key_;
};

/// Argument outside an operation's domain (negative distance, zero-norm state, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Lens placed exactly one focal length from the last waist: the image is at infinity.
class CollimationError : public DomainError {
public:
  using DomainError::DomainError;
};

/// Grid too coarse for a kernel or a feature (phase aliasing, unresolved slit width).
class ResolutionError : public Error {
public:
  using Error::Error;
};

/// Wave function leaks out of the grid window.
class ClippingError : public Error {
public:
  using Error::Error;
};

/// Profile unsuitable for fringe analysis.
class AnalysisError : public Error {
public:
  using Error::Error;
};

}  // namespace ghost
