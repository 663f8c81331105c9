#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace focusloop {

// Input that violates an ordering or format precondition. The caller's state is
// left untouched when this is thrown.
class InputRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FieldError {
  std::string field;
  std::string message;
};

using FieldErrors = std::vector<FieldError>;

// Validation failure carrying every offending field, not just the first one.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<FieldError> errors);

  const std::vector<FieldError>& errors() const { return errors_; }
  bool names(const std::string& field) const;

 private:
  std::vector<FieldError> errors_;
};

// Append refused because it would break seq density or time ordering, or a log
// file failed to parse.
class CorruptLog : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidLog : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Statistic is mathematically undefined for the given data (e.g. zero variance).
class UndefinedStatistic : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace focusloop
