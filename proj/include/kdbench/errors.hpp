#pragma once

#include <stdexcept>
#include <string>

namespace kdbench {

/// Joint vector or Jacobian sized inconsistently with the chain.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numeric parameter outside its allowed domain (grid size, tolerances, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace kdbench
