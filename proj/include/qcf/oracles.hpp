#pragma once

// Reference computations that share no code path with the production
// routines they check. They use Eigen's own eigensolvers, dense Kronecker
// products and plain quadrature, and are meant for small sizes.

#include "qcf/cnot_discord.hpp"
#include "qcf/spin_star.hpp"

#include <Eigen/Eigenvalues>

#include <functional>

namespace qcf::oracle {

/// Dense bath operators Xi+ = sum a_mu J+^mu and Xi- = Xi+^dagger.
struct DenseBath {
  Operator xiPlus;
  Operator xiMinus;
};
DenseBath denseBath(const LayerConfig& cfg);

/// Joint unitary evolution of the central spin and the bath under
/// H = 2 (s+ (x) Xi- + s- (x) Xi+), bath initially 2^-N I. N <= 8.
class JointEvolution {
 public:
  explicit JointEvolution(const LayerConfig& cfg);

  int totalSpins() const { return n_; }
  /// tr_B[U (rho0 (x) 2^-N I) U^dagger].
  Operator reducedState(double t, const Operator& rho0) const;
  /// Same evolution for several inputs sharing one U(t).
  std::vector<Operator> reducedStates(double t, const std::vector<Operator>& inputs) const;
  /// Reduced images of the Pauli basis elements (not states; same formula, linear).
  std::vector<Operator> images(double t) const;

 private:
  int n_;
  Eigen::Index dimB_;
  Eigen::SelfAdjointEigenSolver<Operator> solver_;
};

/// f12 = 2^-N tr[cos(2t sqrt(A)) cos(2t sqrt(B))], f3 = 2^-N tr[cos(4t sqrt(A))],
/// with cosines built as dense matrix functions of A, B.
struct CosineTraces {
  double f12;
  double f3;
};
enum class BathOperators { Layered, Coupled };
CosineTraces cosineTraces(const LayerConfig& cfg, double t, BathOperators which);

/// Standard Choi matrix sum_ij E_ij (x) Phi(E_ij) of the map F, built through
/// applyTransfer on matrix units. Returns its smallest eigenvalue.
double standardChoiMinEigenvalue(const TransferMatrix& f);

/// int_0^T e^{-u t} g(t) dt, T = 40/u, composite 20-point Gauss-Legendre with
/// panels no wider than panelWidth. Keep panelWidth * (largest frequency of g)
/// at a few radians or below.
double laplaceQuadrature(const std::function<double(double)>& g, double u, double panelWidth = 0.05);
/// Componentwise version for several functions sampled together.
RealVector laplaceQuadrature(const std::function<RealVector(double)>& g, double u, double panelWidth = 0.05);

/// sum_i M_i^dagger M_i of the printed Kraus set, expanded by hand in the Pauli
/// algebra: each M = x0 I + x.sigma gives M^dagger M = (|x0|^2 + |x|^2) I
/// + 2 Re(x0* x).sigma + i (x* cross x).sigma. Returns ||sum - I||_F.
double paperKrausResidualSymbolic(double c3, double t, GammaVariant v);

/// Eigenvalue form of the same sum: (3/4 - (1 - Gamma^2)/2) I, i.e. only the
/// identity component survives.
double paperKrausResidualClosedForm(double c3, double t, GammaVariant v);

}  // namespace qcf::oracle
