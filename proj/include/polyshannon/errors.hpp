#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polyshannon {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Floating-point evaluation lost too many digits to be trusted.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

/// Partial fractions requested for frequencies that are distinct but nearly equal.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a formula (e.g. a pole on the contour).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A structural guarantee failed numerically (negative real zeros, non-zero condition, ...).
class ViolationError : public Error {
 public:
  using Error::Error;
};

class SynthesisError : public Error {
 public:
  using Error::Error;
};

class ExtrapolationError : public Error {
 public:
  using Error::Error;
};

/// Kernel synthesis is restricted to even order N = 2p.
class RestrictionError : public Error {
 public:
  using Error::Error;
};

/// The sampling (non-zero) condition fails for this spectrum.
class NotSamplableError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or configuration. Carries the byte offset of the problem.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace polyshannon
