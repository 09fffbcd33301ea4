#pragma once

#include <stdexcept>
#include <string>

namespace faultloc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line(line),
        column(column) {}
  int line;
  int column;
};

class SemanticError : public Error {
 public:
  SemanticError(int line, const std::string& message)
      : Error(std::to_string(line) + ": " + message), line(line) {}
  int line;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class UnrollError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Conflict budget or enumeration cap exhausted.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Hard clauses alone are unsatisfiable.
class HardUnsatError : public Error {
 public:
  using Error::Error;
};

class MissingVarError : public Error {
 public:
  using Error::Error;
};

class NoConsistentDiagnosis : public Error {
 public:
  using Error::Error;
};

class CapTooLarge : public Error {
 public:
  using Error::Error;
};

}  // namespace faultloc
