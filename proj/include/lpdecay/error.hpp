#pragma once

#include <stdexcept>
#include <string>

namespace lpdecay {

enum class ErrorKind {
  InvalidInput,        // non-finite samples, malformed arrays
  InvalidParameter,    // out-of-range scalar parameters
  SingularMultiplier,  // |xi|^s with s < 0 and a live zero mode
  OutOfBand,           // dyadic annulus above the grid Nyquist frequency
  DomainTooSmall,      // wrap-around guard of the spectral propagator
  AccuracyNotMet,      // quadrature refinement budget exhausted
  Precondition,        // index-set / geometry preconditions
  SuiteDegenerate,     // too many undefined ratios in a suite
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by the spectral propagator; carries the smallest half-width that
/// would satisfy the wrap-around guard.
class DomainTooSmallError : public Error {
 public:
  DomainTooSmallError(const std::string& what, double min_half_width)
      : Error(ErrorKind::DomainTooSmall, what), min_half_width_(min_half_width) {}

  double min_half_width() const noexcept { return min_half_width_; }

 private:
  double min_half_width_;
};

class AccuracyNotMetError : public Error {
 public:
  AccuracyNotMetError(const std::string& what, double achieved)
      : Error(ErrorKind::AccuracyNotMet, what), achieved_(achieved) {}

  double achieved_error() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace lpdecay
