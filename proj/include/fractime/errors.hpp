#pragma once

#include <stdexcept>
#include <string>

namespace fractime {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed: non-finite values, nonconvergence, overflow.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration (inversion settings, model text, Monte Carlo setup).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The operation is not defined for the given model or dynamic.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

namespace detail {
[[noreturn]] void throw_domain(const std::string& where, const std::string& what);
[[noreturn]] void throw_numerical(const std::string& where, const std::string& what);
}  // namespace detail

}  // namespace fractime
