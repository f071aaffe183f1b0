#pragma once

#include <stdexcept>
#include <string>

namespace hirob {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Parameter value outside the (closure of the) constraint domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Expression outside the Clarke-regular class the subdifferential engine
/// handles exactly (negative abs weights, non-smooth surrogate points).
class UnsupportedExpression : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class CombinatorialBlowup : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class NotApplicable : public Error {
 public:
  using Error::Error;
};

class IngestError : public Error {
 public:
  using Error::Error;
};

/// Schema violation in a problem file; `pointer()` is an RFC 6901 JSON pointer.
class ParseError : public Error {
 public:
  ParseError(std::string pointer, const std::string& what)
      : Error(pointer + ": " + what), pointer_(std::move(pointer)) {}

  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

}  // namespace hirob
