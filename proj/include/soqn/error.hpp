#pragma once

#include <stdexcept>
#include <string>

namespace soqn {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad config file, unknown label, invalid parameter.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The arrival rate is not below the capacity of the robot network.
class UnstableError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine could not produce an answer (singular system,
/// oversized state space, bracket exhausted).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace soqn
