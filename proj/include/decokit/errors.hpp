#pragma once

#include <stdexcept>
#include <string>

namespace deco {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical or physical domain of an operation.
class DomainError : public Error {
public:
  using Error::Error;
};

// Gamma function evaluated at a non-positive integer.
class PoleError : public DomainError {
public:
  using DomainError::DomainError;
};

// Result does not fit in a double.
class OverflowError : public Error {
public:
  using Error::Error;
};

// Series, asymptotic expansion or quadrature failed to reach its tolerance.
class ConvergenceError : public Error {
public:
  using Error::Error;
};

}  // namespace deco
