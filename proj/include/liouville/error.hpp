#pragma once

#include <stdexcept>
#include <string>

namespace liouville {

// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The requested problem has no solution (a proven threshold is violated, or
// the mass map never reaches the target). The CLI maps this to exit code 2.
class NonexistenceError : public Error {
 public:
  using Error::Error;
};

// The integrator could not converge the total mass (blow-up, step underflow,
// truncation cap).
class IntegrationError : public Error {
 public:
  using Error::Error;
};

}  // namespace liouville
