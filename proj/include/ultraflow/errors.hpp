#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ultraflow {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter or input lies outside the domain where the object is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Grid sizes do not match (e.g. a GridFn sampled on a different rule).
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// An iterative solve or a time integration failed.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A precondition on the data (not the parameters) is violated.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed function-spec expression.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace ultraflow
