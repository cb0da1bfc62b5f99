#pragma once

#include <stdexcept>
#include <string>

namespace rankone {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad construction config: unknown family, parameter below the family's
// spacer lower bound, malformed stage list.
struct ConfigError : Error {
  using Error::Error;
};

// Requested depth exceeds what the generator can produce.
struct DepthError : Error {
  using Error::Error;
};

// A size/pair/enumeration budget would be exceeded.
struct BudgetError : Error {
  using Error::Error;
};

// An operation was invoked outside its stated precondition
// (e.g. steep decomposition on a non-steep prefix).
struct PreconditionError : Error {
  using Error::Error;
};

}  // namespace rankone
