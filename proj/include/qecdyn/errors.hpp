#pragma once

#include <stdexcept>
#include <string>

namespace qecdyn {

/// Invalid input: bad parameters, malformed configuration, unphysical rates.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not produce a result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive integration failed (step size underflow); carries the time reached.
class IntegrationError : public NumericalError {
 public:
  IntegrationError(const std::string& what, double time_reached)
      : NumericalError(what), time_reached_(time_reached) {}

  double time_reached() const noexcept { return time_reached_; }

 private:
  double time_reached_;
};

}  // namespace qecdyn
