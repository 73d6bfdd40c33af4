#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace engage {

class EngageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid command-line or fetch configuration.
class ConfigError : public EngageError {
 public:
  using EngageError::EngageError;
};

// Non-2xx response or connection failure. status is 0 when no response
// was received.
class TransportError : public EngageError {
 public:
  TransportError(int status, const std::string& message)
      : EngageError(message), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

// The API reported an exhausted quota or rate limit; callers should back off.
class QuotaError : public TransportError {
 public:
  using TransportError::TransportError;
};

// Malformed API payload or snapshot record. field names the offending field;
// line is 1-based and 0 when the input is not line oriented.
class ParseError : public EngageError {
 public:
  ParseError(std::string field, const std::string& message, std::size_t line = 0)
      : EngageError(line == 0 ? message
                              : "line " + std::to_string(line) + ": " + message),
        field_(std::move(field)),
        line_(line) {}
  const std::string& field() const { return field_; }
  std::size_t line() const { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

class StorageError : public EngageError {
 public:
  using EngageError::EngageError;
};

// Sampling produced no snapshots at all.
class EmptySampleError : public EngageError {
 public:
  using EngageError::EngageError;
};

}  // namespace engage
