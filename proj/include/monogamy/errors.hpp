#pragma once

#include <stdexcept>
#include <string>

namespace monogamy {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent user input (unknown ids, bad tables, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed its configured budget.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, unsigned long long required)
      : Error(what), required_(required) {}
  unsigned long long required() const { return required_; }

 private:
  unsigned long long required_;
};

/// A routine that requires a chordal graph was handed a non-chordal one.
class NotChordal : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace monogamy
