#pragma once

#include <stdexcept>
#include <string>

namespace wheelleg {

/// Argument outside the domain of a model formula (non-positive length,
/// sideslip at or beyond +-pi/2, negative vertical load, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Query outside the valid range of a path or schedule.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Ackermann geometry has no solution for the requested curvature.
class InfeasibleTurnError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The plant integrator produced a non-finite state.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Behavior windows that cannot be placed without overlapping.
class ScheduleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. Carries the offending key and line when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::string key = {}, int line = 0)
      : std::runtime_error(format(message, key, line)), key_(std::move(key)), line_(line) {}

  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& message, const std::string& key, int line) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!key.empty()) out += "'" + key + "': ";
    return out + message;
  }

  std::string key_;
  int line_ = 0;
};

}  // namespace wheelleg
