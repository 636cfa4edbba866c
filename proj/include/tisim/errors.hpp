#pragma once
#include <stdexcept>
#include <string>

namespace tisim {

// bad input or violated precondition; the CLI maps this to exit code 2
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// a numerical contract (unitarity, subspace structure, ...) did not hold; exit code 3
struct ContractError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tisim
