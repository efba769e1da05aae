#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace robotval {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Undeclared predicate/operation, wrong arity, inconsistent model.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Object constant substituted into a situation slot or vice versa.
class SubstitutionError : public Error {
 public:
  using Error::Error;
};

/// A ground atom without a truth value was queried.
class TotalityError : public Error {
 public:
  using Error::Error;
};

/// Text input could not be parsed. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line = 0)
      : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An operation was progressed in a state where it is not possible.
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

/// Regression was applied to a formula of the wrong shape.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A task operation still carries variables where constants are required.
class GroundingError : public Error {
 public:
  using Error::Error;
};

/// STL formula references an unknown signal or is otherwise malformed.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// A temporal window fell entirely outside the trace.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// A fluent family has no predicate mapping, or synthesis contradicts WP.
class SynthesisError : public Error {
 public:
  using Error::Error;
};

/// The concrete system cannot realize an abstract initial world.
class InstantiationError : public Error {
 public:
  using Error::Error;
};

/// A falsification problem is ill-posed (e.g. no feasible sample exists).
class SetupError : public Error {
 public:
  using Error::Error;
};

/// Broken internal invariant; indicates a bug rather than bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace robotval
