#pragma once

#include <stdexcept>
#include <string>

namespace iglab {

// Exit status used by the command line tool; the numeric values are part of
// the CLI contract.
enum class ExitCode : int {
  Ok = 0,
  GoldenMismatch = 1,
  InputError = 2,
  NumericalFailure = 3,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept { return ExitCode::InputError; }
};

/// Malformed user input: unknown vertex ids, bad files, bad CLI values.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A family rule produced a negative weight or a non-positive measure.
class FamilyError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Solver failure or non-finite intermediate values.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  explicit NumericalError(const std::string& what) : NumericalError(what, -1.0) {}

  double residual() const noexcept { return residual_; }
  ExitCode exit_code() const noexcept override { return ExitCode::NumericalFailure; }

 private:
  double residual_;
};

/// Broken internal invariant. Seeing one of these is a bug.
class InternalError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::NumericalFailure; }
};

}  // namespace iglab
