#pragma once

#include <stdexcept>
#include <string>

namespace emacfem {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed or unsupported input file.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Mesh violates a structural invariant (orientation, conformity, tagging).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class InvalidRegion : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  SingularMatrix(const std::string& what, long pivot_row)
      : Error(what), pivot_row_(pivot_row) {}
  long pivot_row() const noexcept { return pivot_row_; }

 private:
  long pivot_row_;
};

class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double last_residual, int iterations)
      : Error(what), last_residual_(last_residual), iterations_(iterations) {}
  double last_residual() const noexcept { return last_residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double last_residual_;
  int iterations_;
};

}  // namespace emacfem
