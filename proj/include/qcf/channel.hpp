#pragma once

#include "qcf/operator_core.hpp"

#include <Eigen/LU>

#include <vector>

namespace qcf {

/// Real d^2 x d^2 matrix of a linear map in a Hermitian basis:
/// F_kl = tr[W_k Phi(W_l)], so that Phi(rho) = sum_k (F r)_k W_k.
/// Also used for generators (L = dF/dt F^-1), which share the representation.
struct TransferMatrix {
  RealMatrix matrix;
  HermitianBasis basis;
  double imaginaryResidue = 0.0;  // largest |Im F_kl| dropped at construction
};

/// Coefficient matrix S of Phi(rho) = sum_ab S_ab beta_a rho beta_b^dagger.
/// For generators the same object holds R.
struct ChoiMatrix {
  Operator matrix;
  OperatorBasis basis;
  double asymmetryResidue = 0.0;  // max|S - S^dagger| before Hermitization
};

struct KrausSet {
  std::vector<Operator> operators;
  std::vector<double> weights;        // Choi eigenvalue behind each operator
  double truncation = 0.0;            // eigenvalues at or below this were dropped
  std::vector<double> droppedEigenvalues;
};

/// Linear change of representation between TransferMatrix and ChoiMatrix for a
/// fixed pair of bases: T_(kl),(ab) = tr[W_k beta_a W_l beta_b^dagger] and
/// F_kl = sum_ab T_(kl),(ab) S_ab. The LU factorization is built once.
class RepresentationMap {
 public:
  RepresentationMap(HermitianBasis hermitian, OperatorBasis operators);

  const HermitianBasis& hermitianBasis() const { return w_; }
  const OperatorBasis& operatorBasis() const { return beta_; }
  const Operator& couplingTensor() const { return t_; }
  double conditionNumber() const { return condition_; }

  /// Solves T s = vec(F) and Hermitizes; the pre-Hermitization asymmetry is recorded.
  ChoiMatrix choiFromTransfer(const TransferMatrix& f) const;
  /// F = T vec(S); throws NotHermiticityPreserving when Im F exceeds imaginaryTol.
  TransferMatrix transferFromChoi(const ChoiMatrix& s, double imaginaryTol = 1e-8) const;

 private:
  HermitianBasis w_;
  OperatorBasis beta_;
  Operator t_;
  Eigen::PartialPivLU<Operator> lu_;
  double condition_;
};

/// Shared map for the qubit defaults (pauliBasis, ladderBasis).
const RepresentationMap& qubitRepresentation();
/// Shared map for the qubit Pauli basis and the matrix-unit basis.
const RepresentationMap& qubitMatrixUnitRepresentation();

/// F_kl = tr[W_k Phi(W_l)] from the d^2 images Phi(W_l).
TransferMatrix transferFromMap(const std::vector<Operator>& images, const HermitianBasis& basis,
                               double imaginaryTol = 1e-8);

/// Phi(rho) = sum_k (F r)_k W_k. Works for non-Hermitian rho through complex coefficients.
Operator applyTransfer(const TransferMatrix& f, const Operator& rho);

/// Ladder basis for qubits, matrix units otherwise.
OperatorBasis defaultOperatorBasis(Eigen::Index d);

/// Choi matrix in the default operator basis of F's dimension.
ChoiMatrix choiFromTransfer(const TransferMatrix& f);
ChoiMatrix choiFromTransfer(const TransferMatrix& f, const OperatorBasis& beta);
/// Transfer matrix in the generalized Gell-Mann basis (Pauli basis for qubits).
TransferMatrix transferFromChoi(const ChoiMatrix& s);
TransferMatrix transferFromChoi(const ChoiMatrix& s, const HermitianBasis& w);

/// Kraus operators M_i = sqrt(lambda_i) sum_a Pi(i)_a beta_a from the Choi
/// eigensystem. Eigenvalues in [-tol, tol] are dropped; any eigenvalue below
/// -tol raises NotCompletelyPositive.
KrausSet krausFromChoi(const ChoiMatrix& s, double tol = 1e-12);

struct CpVerdict {
  bool completelyPositive;
  double minEigenvalue;
};

struct TpVerdict {
  bool tracePreserving;
  double residual;  // ||sum M^dagger M - I||_F
};

CpVerdict isCompletelyPositive(const ChoiMatrix& s, double tol = 1e-10);
TpVerdict isTracePreserving(const KrausSet& k, double tol = 1e-10);
TpVerdict isTracePreserving(const std::vector<Operator>& ops, double tol = 1e-10);

Operator applyKraus(const KrausSet& k, const Operator& rho);
Operator applyKraus(const std::vector<Operator>& ops, const Operator& rho);

/// Lambda(rho) = sum_ab R_ab beta_a rho beta_b^dagger.
Operator applyGenerator(const ChoiMatrix& r, const Operator& rho);

/// Images Phi(W_l) of a Kraus channel; feeds transferFromMap for round trips.
std::vector<Operator> krausImages(const std::vector<Operator>& ops, const HermitianBasis& basis);

}  // namespace qcf
