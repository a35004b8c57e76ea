#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qbc {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument: out-of-range index, parameter outside its domain.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Malformed text input. line() is 1-based; 0 when not line-specific.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Structurally invalid file (e.g. Pajek edge inside one mode).
class FormatError : public ParseError {
 public:
  using ParseError::ParseError;
};

// Density requested for a (sub)graph with an empty side.
class UndefinedDensityError : public Error {
 public:
  UndefinedDensityError() : Error("density undefined: empty vertex side") {}
};

// Parameters admit no feasible selection (e.g. k_min > k_max).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Mathematical domain violation (log of zero edges, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace qbc
