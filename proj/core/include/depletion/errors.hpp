#pragma once

#include <stdexcept>
#include <string>

namespace depletion {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

/// A configured resource cap would be exceeded. The CLI maps these to exit code 3.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

class EnumerationCapExceeded : public CapExceeded {
 public:
  using CapExceeded::CapExceeded;
  const char* kind() const noexcept override { return "EnumerationCapExceeded"; }
};

class StateSpaceCapExceeded : public CapExceeded {
 public:
  using CapExceeded::CapExceeded;
  const char* kind() const noexcept override { return "StateSpaceCapExceeded"; }
};

class ActivityCapExceeded : public CapExceeded {
 public:
  using CapExceeded::CapExceeded;
  const char* kind() const noexcept override { return "ActivityCapExceeded"; }
};

class DomainError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "DomainError"; }
};

class FingerprintMismatch : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "FingerprintMismatch"; }
};

class ConfigError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "ConfigError"; }
};

class InvalidPartition : public ConfigError {
 public:
  using ConfigError::ConfigError;
  const char* kind() const noexcept override { return "InvalidPartition"; }
};

class ParseError : public ConfigError {
 public:
  using ConfigError::ConfigError;
  const char* kind() const noexcept override { return "ParseError"; }
};

}  // namespace depletion
