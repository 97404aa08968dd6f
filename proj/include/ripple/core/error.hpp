#pragma once

#include <stdexcept>
#include <string>

namespace ripple {

// Base class for every error thrown by the library. Callers that only care
// about "something in ripple failed" can catch this; everything else is a
// plain std::invalid_argument for precondition violations.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Linear algebra gave up (Cholesky failed after the full jitter ladder).
class DegenerateCovariance : public Error {
 public:
  using Error::Error;
};

}  // namespace ripple
