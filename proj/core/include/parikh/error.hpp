#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace parikh {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed grammar text. Line and column are 1-based.
class GrammarSyntaxError : public Error {
 public:
  GrammarSyntaxError(std::string message, int line, int column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
              message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Structurally invalid grammar (missing axiom, empty production list, ...).
class GrammarError : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A checked internal invariant failed; indicates a bug rather than bad input.
class InvariantError : public Error {
 public:
  using Error::Error;
};

// A configured exploration budget was exhausted before the result was complete.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::size_t budget)
      : Error(what + " (budget " + std::to_string(budget) + ")"), budget_(budget) {}

  std::size_t budget() const { return budget_; }

 private:
  std::size_t budget_;
};

}  // namespace parikh
