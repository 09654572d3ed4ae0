#pragma once

#include <stdexcept>
#include <string>

namespace proxinorm {

// A hypothesis of a lemma does not hold for the given input (for example a
// vanishing pairing that a construction divides the world by).
class HypothesisError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// The caller broke an operation's precondition.
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A configured depth, precision or elimination budget was exhausted.
class BudgetError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed external input (JSON files, config files).
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace proxinorm
