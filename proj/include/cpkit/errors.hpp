// Exception types shared by all cpkit modules.

#pragma once

#include <stdexcept>

namespace cpkit {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};
struct NotHermitian : Error {
  using Error::Error;
};
struct NonOrthonormalBasis : Error {
  using Error::Error;
};
struct WrongBasis : Error {
  using Error::Error;
};
struct NotCompletelyPositive : Error {
  using Error::Error;
};
struct BasisNotUnitFirst : Error {
  using Error::Error;
};
struct InvariantViolation : Error {
  using Error::Error;
};
struct SingularPropagator : Error {
  using Error::Error;
};
struct InvalidState : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};

}  // namespace cpkit
