#pragma once

#include <stdexcept>
#include <string>

namespace fracspec {

// Base of every error thrown by the core library. The C API maps each
// subclass onto one fs_status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A numerical procedure did not reach its accuracy target. Carries the last
// two estimates so callers can judge how far off it was.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double previous, double last)
      : Error(what), previous_(previous), last_(last) {}
  double previous() const { return previous_; }
  double last() const { return last_; }

 private:
  double previous_;
  double last_;
};

// An iteration exhausted its budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class NotSpdError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fracspec
