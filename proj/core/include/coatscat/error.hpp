#pragma once

#include <stdexcept>
#include <string>

namespace coatscat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class GeometryError : public Error {
public:
  using Error::Error;
};

/// A linear system that could not be solved reliably. Carries the frequency
/// and the reciprocal condition estimate that triggered the rejection.
class SolverError : public Error {
public:
  SolverError(const std::string &what, double kappa, double rcond)
      : Error(what), kappa_(kappa), rcond_(rcond) {}

  double kappa() const noexcept { return kappa_; }
  double rcond() const noexcept { return rcond_; }

private:
  double kappa_;
  double rcond_;
};

class SynthesisError : public Error {
public:
  using Error::Error;
};

class FormatError : public Error {
public:
  using Error::Error;
};

} // namespace coatscat
