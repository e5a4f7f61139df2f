#pragma once

#include <stdexcept>
#include <string>

namespace kerr {

/// Precondition violation on user-supplied parameters or data.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Query outside the domain on which a function is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A blow-up bound was requested but its hypotheses do not hold.
class InapplicableBound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kerr
