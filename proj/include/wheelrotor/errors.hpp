#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wheelrotor {

// Base for every error raised by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class GimbalSingularity : public Error {
public:
  using Error::Error;
};

class InvalidInput : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

/// Raised when a config or scenario file fails validation. Carries one entry per
/// offending field so callers can report all problems at once.
class ValidationError : public Error {
public:
  struct Issue {
    std::string field;
    std::string message;
  };

  explicit ValidationError(std::vector<Issue> issues);

  const std::vector<Issue>& issues() const { return issues_; }

private:
  std::vector<Issue> issues_;
};

class SimulationDiverged : public Error {
public:
  using Error::Error;
};

class FallenOver : public Error {
public:
  using Error::Error;
};

}  // namespace wheelrotor
