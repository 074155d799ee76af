#pragma once

#include <stdexcept>

namespace rotopt {

// Numeric failure (divergent search, non-finite result) as opposed to input
// validation. The CLI maps this to exit code 2, validation errors to 1.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rotopt
