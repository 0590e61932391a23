#ifndef RWTA_ERROR_HPP
#define RWTA_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rwta {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed term text or corpus line. Line and column are 1-based.
class ParseError : public Error {
 public:
  enum class Kind { syntax, rank_conflict, unknown_symbol };

  ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& what)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        kind_(kind),
        line_(line),
        column_(column) {}

  Kind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
};

/// Two objects use the same symbol name at different ranks.
class AlphabetMismatch : public Error {
 public:
  using Error::Error;
};

/// Checked weight arithmetic left the carrier.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// A precondition on an argument does not hold (non-constant substitution
/// symbol, partial classifier, unknown state, nondeterministic input, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace rwta

#endif  // RWTA_ERROR_HPP
