#pragma once

#include <stdexcept>
#include <string>

namespace klein {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A profile or grid that does not describe a Riemannian metric on the model.
class InvalidMetric : public Error {
 public:
  using Error::Error;
};

// An argument outside the domain of a formula (e.g. a >= omega for the density).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A conformal type that lies on the wrong side of a regime threshold.
class RegimeError : public Error {
 public:
  using Error::Error;
};

// Root bracketing or convergence failure; the message carries the bracket.
class SolverError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

}  // namespace klein
