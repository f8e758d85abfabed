#pragma once

#include <stdexcept>
#include <string>

namespace exnet {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (graph files, quantities, orderings, configs).
class ParseError : public Error {
 public:
  using Error::Error;
};

// A caller broke an operation's precondition.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// Work refused because it exceeds a configured size or state budget.
class LimitExceeded : public Error {
 public:
  using Error::Error;
};

// The optimization model reached a state its formulation rules out.
class ModelViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace exnet
