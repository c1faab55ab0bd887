#pragma once

#include <stdexcept>
#include <string>

namespace sklab {

/// Invalid argument: out-of-range sizes, mismatched dimensions, bad indices.
class ParameterError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Parameters outside the high-temperature regime where the analytics hold.
class RegimeError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Problem size exceeds what exact enumeration can handle.
class CapacityError : public std::length_error {
  public:
    using std::length_error::length_error;
};

/// An iterative solver failed to converge.
class NumericError : public std::runtime_error {
  public:
    NumericError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual)
    {
    }

    double residual() const noexcept { return residual_; }

  private:
    double residual_;
};

}  // namespace sklab
