#pragma once

#include <stdexcept>
#include <string>

namespace rlab {

/// Process exit codes shared by the CLI and the error hierarchy.
enum class ExitCode : int {
  ok = 0,
  precondition = 2,
  non_convergence = 3,
  certificate_failure = 4,
  usage = 64,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept = 0;
};

/// Caller passed arguments outside an operation's domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::precondition; }
};

/// Sum of supports exceeds the measure of the space.
class SupportOverflow : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// f, g and their declared common refinement do not describe the same pair.
class IncompatiblePartition : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Base profile is outside the unit ball of the Sobolev space.
class MembershipViolation : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::non_convergence; }
};

class CertificateFailure : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::certificate_failure; }
};

/// No λ₀ on the seeding grid gives a positive separation constant.
class NoPositiveEpsilon : public CertificateFailure {
 public:
  using CertificateFailure::CertificateFailure;
};

/// A dilated witness fell below the requested lower bound.
class QuasinormBelowLambda : public CertificateFailure {
 public:
  QuasinormBelowLambda(const std::string& what, double kappa, double value)
      : CertificateFailure(what), kappa_(kappa), value_(value) {}
  double kappa() const noexcept { return kappa_; }
  double value() const noexcept { return value_; }

 private:
  double kappa_;
  double value_;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw PreconditionError(message);
}

}  // namespace rlab
