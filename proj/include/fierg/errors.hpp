#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fierg {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments or data (non-binary entries, dimension mismatch, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A request exceeds what an exact enumeration can handle.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Inconsistent configuration detected before any work starts.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A sampler state violates its invariants (e.g. sigma2 <= 0).
class InvalidState : public Error {
 public:
  using Error::Error;
};

class FactorizationError : public Error {
 public:
  using Error::Error;
};

// Persisted file is truncated or internally inconsistent.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

class VersionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace fierg
