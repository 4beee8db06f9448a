#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pbda {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Vector or sample dimensions do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A point that must be normalized has zero (or non-positive) norm.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// The implicit-function gradient of a kl-inverted bound is 0/0 at this point.
/// Callers are expected to perturb the weights and retry.
class DegenerateGradient : public Error {
 public:
  using Error::Error;
};

class IOError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace pbda
