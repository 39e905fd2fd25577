#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace autoconv {

/// Base for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A coefficient vector contained NaN or infinity.
class NonFiniteCoefficient : public InvalidArgument {
 public:
  NonFiniteCoefficient(std::size_t index, double value);

  /// 1-based position of the offending entry.
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// A series evaluation overflowed binary64.
class Overflow : public Error {
 public:
  using Error::Error;
};

/// The solver's line search could not make progress above round-off.
class LineSearchFailure : public Error {
 public:
  LineSearchFailure(const std::string& what, std::vector<double> iterate);

  const std::vector<double>& iterate() const noexcept { return iterate_; }

 private:
  std::vector<double> iterate_;
};

/// Malformed or unreadable persisted data.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace autoconv
