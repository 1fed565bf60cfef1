#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace muhasse {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters outside the supported inert unitary setting.
class InvalidParameters : public Error {
 public:
  using Error::Error;
};

/// An operation was called on data that violates its precondition
/// (shape mismatch, wrong Smith type, non-invertible change of basis, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The ℓ-adic precision of the data is too small to decide the answer.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, long double required)
      : Error(what), required_(required) {}
  long double required() const { return required_; }

 private:
  long double required_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace muhasse
