#pragma once

#include <Eigen/Core>

#include <complex>
#include <stdexcept>
#include <string>

namespace qcf {

using complex = std::complex<double>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Dense complex operator: density matrices, observables, unitaries, Kraus operators.
using Operator = Matrix<complex>;

using RealMatrix = Matrix<double>;
using RealVector = Vector<double>;

inline constexpr complex I_unit{0.0, 1.0};

/// Numerical thresholds shared by every module. Pass a modified copy to
/// override; there is no mutable global instance.
struct Tolerances {
  double structural = 1e-10;       // Hermiticity, TP residuals, Choi positivity
  double reconstruction = 1e-12;   // basis orthonormality, round trips
  double krausTruncation = 1e-12;  // eigenvalues at or below this are dropped
  double imaginaryResidue = 1e-8;  // transferFromMap: tolerated Im part of F
  double pole = 1e-8;              // |f12|, |f3| below this means F is singular
  double sectorMerge = 1e-9;       // equality of (lambda1, lambda2) pairs
};

inline const Tolerances& defaultTolerances() {
  static const Tolerances t{};
  return t;
}

// Error hierarchy. Every failure raised by the library derives from Error.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  NotHermitian(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class NotHermiticityPreserving : public Error {
 public:
  NotHermiticityPreserving(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class NotCompletelyPositive : public Error {
 public:
  NotCompletelyPositive(const std::string& what, double eigenvalue)
      : Error(what), eigenvalue_(eigenvalue) {}
  double eigenvalue() const { return eigenvalue_; }

 private:
  double eigenvalue_;
};

class PoleEncountered : public Error {
 public:
  PoleEncountered(const std::string& function, double t, double value)
      : Error("generator pole: " + function + " = " + std::to_string(value) +
              " at t = " + std::to_string(t)),
        function_(function), t_(t), value_(value) {}
  const std::string& function() const { return function_; }
  double time() const { return t_; }
  double value() const { return value_; }

 private:
  std::string function_;
  double t_;
  double value_;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ModelLimit : public Error {
 public:
  using Error::Error;
};

class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace qcf
