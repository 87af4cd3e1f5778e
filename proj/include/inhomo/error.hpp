#pragma once

#include <stdexcept>
#include <string>

namespace inhomo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands live on different grids or arrays have the wrong length.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A precondition on the mathematical data failed (range, support, positivity).
class DomainError : public Error {
 public:
  using Error::Error;
};

// An iterative method stopped without meeting its tolerance or blew up.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Time integration had to stop (CFL violation, lost positivity, non-finite values).
class IntegrationAbort : public Error {
 public:
  IntegrationAbort(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

// Malformed configuration or input file; the message names the location.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace inhomo
