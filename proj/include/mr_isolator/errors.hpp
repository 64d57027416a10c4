#pragma once

#include <stdexcept>
#include <string>

namespace mr_isolator {

/// Bad configuration or parameter value. The message names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A non-finite value reached the plant equations.
class InvalidStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The integrated state became non-finite.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double last_valid_t)
      : std::runtime_error(what), last_valid_t_(last_valid_t) {}

  double last_valid_t() const { return last_valid_t_; }

 private:
  double last_valid_t_;
};

/// The PID received a non-finite error sample.
class ControllerFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Undamped plant driven exactly at a natural frequency.
class ResonanceSingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TuningFailedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mr_isolator
