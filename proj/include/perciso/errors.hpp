#pragma once

#include <stdexcept>
#include <string>

namespace perciso {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad argument or violated operation precondition.
struct DomainError : Error {
  using Error::Error;
};

// Query or measurement outside the safe region of a finite box.
struct MarginError : Error {
  using Error::Error;
};

// Endpoints not joined by an open path; b(x,y) undefined.
struct DisconnectedError : Error {
  using Error::Error;
};

// An explicit work budget was exhausted.  Never a silent truncation.
struct BudgetError : Error {
  using Error::Error;
};

// Monte Carlo machinery failed beyond its retry budget.
struct SamplingError : Error {
  using Error::Error;
};

// Half-plane intersection collapsed to an empty or flat region.
struct DegeneracyError : Error {
  using Error::Error;
};

}  // namespace perciso
