#ifndef COMMAVG_ERRORS_HPP
#define COMMAVG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace commavg {

/// Base class for every error the library raises.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Objects that should live on the same space (or have matching sizes) do not.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// Input data violates a type invariant (weights, permutations, group axioms).
class ValidationError : public Error {
public:
  using Error::Error;
};

/// A structural precondition fails, e.g. a pair-space support that an action does not preserve.
class StructuralError : public Error {
public:
  using Error::Error;
};

/// A numeric precondition fails (negative observable, empty window, escaped box).
class DomainError : public Error {
public:
  using Error::Error;
};

namespace detail {

inline void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": size " + std::to_string(a) +
                         " does not match " + std::to_string(b));
  }
}

} // namespace detail
} // namespace commavg

#endif // COMMAVG_ERRORS_HPP
