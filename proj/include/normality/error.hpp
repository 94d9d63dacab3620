#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace normality {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or forbidden family expression. `offset()` is the byte offset
/// into the source text where the problem was detected.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

/// Failure while evaluating a family member (vanishing denominator, bad
/// exponent, zero on a sample where the family must be zero-free).
class EvalError : public Error {
public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Invalid run configuration. `path()` names the offending field.
class ValidationError : public Error {
public:
  ValidationError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}

  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

}  // namespace normality
