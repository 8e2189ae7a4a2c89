// randkit/errors.hpp -- error taxonomy; the CLI maps classes to exit codes.
#pragma once

#include <stdexcept>
#include <string>

namespace randkit {

// Base class. Exit-code mapping: ParseError -> 2, BudgetError -> 4,
// every other Error (invariant violations) -> 3.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed external input: bad rational literal, bad source spec, bad JSON.
struct ParseError : Error {
  using Error::Error;
};

// Well-formed input whose content violates a stated invariant.
struct InvariantError : Error {
  using Error::Error;
};

// An inspection or search budget ran out before the answer was decided.
struct BudgetError : Error {
  using Error::Error;
};

// Fast-Cauchy validity |q_n - q_m| <= 2^-m failed within the inspected prefix.
struct InvalidCode : InvariantError {
  using InvariantError::InvariantError;
};

// An operation needed more bits than the supplied prefix carries.
struct PrefixTooShort : InvariantError {
  using InvariantError::InvariantError;
};

// Multiplicative form requested at a node with zero capital.
struct ZeroCapitalNode : InvariantError {
  explicit ZeroCapitalNode(const std::string& node)
      : InvariantError("zero capital at node '" + node + "'"), node_(node) {}
  const std::string& node() const { return node_; }

 private:
  std::string node_;
};

// Normalized conditioning on a null open set.
struct ZeroMeasureSet : InvariantError {
  using InvariantError::InvariantError;
};

// A rescale budget outside [0, declared integral].
struct BudgetOutOfRange : InvariantError {
  using InvariantError::InvariantError;
};

// An operation's entry condition does not hold for the supplied arguments.
struct PreconditionViolated : InvariantError {
  using InvariantError::InvariantError;
};

// Every level up to the budget rejected the point.
struct BudgetExceeded : BudgetError {
  using BudgetError::BudgetError;
};

// A layering horizon too small for the residuals to vanish.
struct HorizonTooSmall : BudgetError {
  using BudgetError::BudgetError;
};

}  // namespace randkit
