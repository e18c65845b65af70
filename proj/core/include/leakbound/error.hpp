#pragma once

#include <stdexcept>
#include <string>

namespace leakbound {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input: bad probabilities, bad alphabets, a
/// network that fails validation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A bound or construction was asked for outside its hypotheses
/// (e.g. tau_max2 > 1 where the coupling is not known to exist).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed the configured state budget.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A linear program has no feasible point.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed (negative mass, broken marginal).
/// Always a bug in the construction, never a user error.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Default cap on enumerated joint states (tuples, assignments, LP columns).
inline constexpr std::size_t kDefaultMaxStates = 1'000'000;

}  // namespace leakbound
