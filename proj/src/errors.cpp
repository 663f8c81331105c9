#include "focusloop/errors.hpp"

#include <algorithm>

namespace focusloop {

namespace {

std::string describe(const std::vector<FieldError>& errors) {
  std::string msg = "validation failed:";
  for (const auto& e : errors) msg += " " + e.field + " (" + e.message + ");";
  return msg;
}

}  // namespace

ValidationError::ValidationError(std::vector<FieldError> errors)
    : std::runtime_error(describe(errors)), errors_(std::move(errors)) {}

bool ValidationError::names(const std::string& field) const {
  return std::any_of(errors_.begin(), errors_.end(),
                     [&](const FieldError& e) { return e.field == field; });
}

}  // namespace focusloop
