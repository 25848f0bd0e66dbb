#pragma once

#include <stdexcept>
#include <string>

namespace nclift {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live over different alphabets or moduli.
class MismatchError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text (polynomial, circuit or automaton files).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A structural invariant does not hold (bad node ids, out-of-range indices).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A configured degree, term, state or transition budget was exceeded.
/// Raised instead of silently truncating.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace nclift
