#pragma once

#include <stdexcept>
#include <string>

namespace wtbouss {

/// Bad argument to a library call (grid mismatch, nonzero-mean input, ...).
class ArgumentError : public std::invalid_argument {
  public:
    explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

/// Config file / command line problem. CLI exit code 2.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: blow-up, NaN, non-convergent series. CLI exit code 3.
class NumericalError : public std::runtime_error {
  public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Contraction guard of the Neumann resolvent violated. CLI exit code 4.
class GuardError : public std::runtime_error {
  public:
    explicit GuardError(const std::string& what, double factor)
        : std::runtime_error(what), measured_factor(factor) {}
    double measured_factor;
};

}  // namespace wtbouss
