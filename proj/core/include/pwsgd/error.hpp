#pragma once

#include <stdexcept>
#include <string>

namespace pwsgd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Thrown when a factorization meets a (numerically) rank-deficient input.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// Raised by iterative routines that exhaust their iteration budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, long line = -1, long column = -1)
      : Error(format(what, line, column)), line_(line), column_(column) {}

  long line() const noexcept { return line_; }
  long column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, long line, long column) {
    std::string out = what;
    if (line >= 0) out += " (line " + std::to_string(line);
    if (line >= 0 && column >= 0) out += ", column " + std::to_string(column);
    if (line >= 0) out += ")";
    return out;
  }

  long line_;
  long column_;
};

}  // namespace pwsgd
