#pragma once

#include <stdexcept>
#include <string>

namespace sinekernel {

// Bad parameter: out-of-range order, reversed interval, lambda outside (0,1].
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parameter outside the documented double-precision validity window.
class WindowError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Cholesky found a non-positive pivot.
class NotPositiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotInvertibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The spectral parameter of a canonical system lies on the integration path.
class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sinekernel
