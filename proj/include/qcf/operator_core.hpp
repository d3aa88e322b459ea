#pragma once

#include "qcf/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <type_traits>
#include <vector>

namespace qcf {

namespace detail {

inline double conjIfComplex(double x) { return x; }
inline complex conjIfComplex(const complex& x) { return std::conj(x); }

inline double realPart(double x) { return x; }
inline double realPart(const complex& x) { return x.real(); }

}  // namespace detail

/// Kronecker product A (x) B. The first factor indexes the slow (outer) block.
template <typename DerivedA, typename DerivedB>
auto tensorProduct(const Eigen::MatrixBase<DerivedA>& a,
                   const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename Eigen::ScalarBinaryOpTraits<typename DerivedA::Scalar,
                                                      typename DerivedB::Scalar>::ReturnType;
  Matrix<Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
          Scalar(a(i, j)) * b.template cast<Scalar>();
  return out;
}

enum class Keep { First, Second };

/// Partial trace of a bipartite operator on C^dA (x) C^dB, keeping one factor.
template <typename Derived>
Matrix<typename Derived::Scalar> partialTrace(const Eigen::MatrixBase<Derived>& rho,
                                              Eigen::Index dA, Eigen::Index dB, Keep keep) {
  using Scalar = typename Derived::Scalar;
  if (dA <= 0 || dB <= 0 || rho.rows() != dA * dB || rho.cols() != dA * dB)
    throw DimensionMismatch("partialTrace: operator is " + std::to_string(rho.rows()) + "x" +
                            std::to_string(rho.cols()) + ", expected " +
                            std::to_string(dA * dB) + " square");
  if (keep == Keep::First) {
    Matrix<Scalar> out = Matrix<Scalar>::Zero(dA, dA);
    for (Eigen::Index i = 0; i < dA; ++i)
      for (Eigen::Index j = 0; j < dA; ++j)
        for (Eigen::Index k = 0; k < dB; ++k) out(i, j) += rho(i * dB + k, j * dB + k);
    return out;
  }
  Matrix<Scalar> out = Matrix<Scalar>::Zero(dB, dB);
  for (Eigen::Index k = 0; k < dA; ++k) out += rho.block(k * dB, k * dB, dB, dB);
  return out;
}

/// Largest entrywise deviation from Hermiticity.
template <typename Derived>
double hermiticityResidual(const Eigen::MatrixBase<Derived>& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Scalar>
struct EigenSystem {
  RealVector values;       // descending
  Matrix<Scalar> vectors;  // orthonormal columns, vectors.col(i) pairs with values(i)
};

/// Eigendecomposition of a Hermitian (or real symmetric) matrix by cyclic
/// Jacobi rotations.
///
/// Eigenvalues come back in descending order; equal eigenvalues keep the order
/// in which the sweeps left them. Each eigenvector is rephased so that its
/// first component with modulus above 1e-10 is real and positive.
///
/// Throws NotHermitian when max|A - A^dagger| exceeds hermitianTol * max(1, max|A|).
template <typename Derived>
EigenSystem<typename Derived::Scalar> hermitianEigen(const Eigen::MatrixBase<Derived>& input,
                                                     double hermitianTol = 1e-10) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = input.rows();
  if (input.cols() != n) throw DimensionMismatch("hermitianEigen: matrix is not square");

  const double scale = std::max(1.0, input.cwiseAbs().maxCoeff());
  const double asym = n > 0 ? hermiticityResidual(input) : 0.0;
  if (asym > hermitianTol * scale)
    throw NotHermitian("hermitianEigen: input is not Hermitian", asym);

  Matrix<Scalar> a = (input + input.adjoint()) / 2.0;
  Matrix<Scalar> v = Matrix<Scalar>::Identity(n, n);

  auto offNorm = [&] {
    double s = 0.0;
    for (Eigen::Index q = 0; q < n; ++q)
      for (Eigen::Index p = 0; p < q; ++p) s += std::norm(a(p, q));
    return std::sqrt(2.0 * s);
  };
  const double total = a.norm();
  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    const double off = offNorm();
    if (off == 0.0 || off <= 1e-16 * total) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar z = a(p, q);
        const double absz = std::abs(z);
        if (absz == 0.0) continue;
        const double app = detail::realPart(a(p, p));
        const double aqq = detail::realPart(a(q, q));
        // Negligible against both diagonal entries after the first sweeps.
        if (sweep > 3 && absz < 1e-18 * (std::abs(app) + std::abs(aqq))) {
          a(p, q) = Scalar(0);
          a(q, p) = Scalar(0);
          continue;
        }
        const Scalar u = z / absz;
        const double theta = (aqq - app) / (2.0 * absz);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Scalar ubar = detail::conjIfComplex(u);

        // G = [[c, s], [-s conj(u), c conj(u)]]; A <- G^dagger A G, V <- V G.
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar akp = a(k, p);
          const Scalar akq = a(k, q);
          a(k, p) = c * akp - s * ubar * akq;
          a(k, q) = s * akp + c * ubar * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar apk = a(p, k);
          const Scalar aqk = a(q, k);
          a(p, k) = c * apk - s * u * aqk;
          a(q, k) = s * apk + c * u * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar vkp = v(k, p);
          const Scalar vkq = v(k, q);
          v(k, p) = c * vkp - s * ubar * vkq;
          v(k, q) = s * vkp + c * ubar * vkq;
        }
        a(p, q) = Scalar(0);
        a(q, p) = Scalar(0);
        a(p, p) = Scalar(detail::realPart(a(p, p)));
        a(q, q) = Scalar(detail::realPart(a(q, q)));
      }
    }
  }
  if (sweep == kMaxSweeps) throw ConvergenceFailure("hermitianEigen: Jacobi sweeps did not converge");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return detail::realPart(a(i, i)) > detail::realPart(a(j, j));
  });

  EigenSystem<Scalar> out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.values(k) = detail::realPart(a(src, src));
    auto col = out.vectors.col(k);
    col = v.col(src);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double m = std::abs(col(i));
      if (m > 1e-10) {
        col *= detail::conjIfComplex(col(i)) / m;
        col(i) = Scalar(detail::realPart(col(i)));
        break;
      }
    }
  }
  return out;
}

/// f(A) = sum_i f(lambda_i) |v_i><v_i| for Hermitian A. The result scalar is
/// whatever f returns combined with A's scalar (exp(-i t lambda) gives complex).
template <typename Derived, typename F>
auto matrixFunction(const Eigen::MatrixBase<Derived>& a, F&& f, double hermitianTol = 1e-10) {
  using In = typename Derived::Scalar;
  using Ret = std::decay_t<decltype(f(0.0))>;
  using Out = typename Eigen::ScalarBinaryOpTraits<In, Ret>::ReturnType;
  const auto eig = hermitianEigen(a, hermitianTol);
  const Eigen::Index n = a.rows();
  Vector<Out> fv(n);
  for (Eigen::Index i = 0; i < n; ++i) fv(i) = Out(f(eig.values(i)));
  const Matrix<Out> vecs = eig.vectors.template cast<Out>();
  Matrix<Out> out = vecs * fv.asDiagonal() * vecs.adjoint();
  return out;
}

// ---------------------------------------------------------------------------
// Operator bases

namespace pauli {
Operator identity();
Operator x();
Operator y();
Operator z();
Operator plus();   // |0><1|, raises to the sigma_z = +1 state
Operator minus();  // |1><0|
}  // namespace pauli

/// Orthonormal Hermitian basis {W_a} of d x d operators, tr[W_a W_b] = delta_ab.
class HermitianBasis {
 public:
  /// Validates Hermiticity and orthonormality; throws Error otherwise.
  HermitianBasis(std::vector<Operator> ops, double tol = 1e-12);

  Eigen::Index dim() const { return dim_; }
  std::size_t size() const { return ops_.size(); }
  const Operator& operator[](std::size_t a) const { return ops_[a]; }
  const std::vector<Operator>& operators() const { return ops_; }

 private:
  Eigen::Index dim_;
  std::vector<Operator> ops_;
};

/// Orthonormal (not necessarily Hermitian) operator basis {beta_a},
/// tr[beta_a^dagger beta_b] = delta_ab.
class OperatorBasis {
 public:
  OperatorBasis(std::vector<Operator> ops, double tol = 1e-12);

  Eigen::Index dim() const { return dim_; }
  std::size_t size() const { return ops_.size(); }
  const Operator& operator[](std::size_t a) const { return ops_[a]; }
  const std::vector<Operator>& operators() const { return ops_; }

 private:
  Eigen::Index dim_;
  std::vector<Operator> ops_;
};

/// {I, sx, sy, sz} / sqrt(2).
HermitianBasis pauliBasis();
/// Normalized generalized Gell-Mann basis; identity first. For d = 2 this is pauliBasis().
HermitianBasis gellMannBasis(Eigen::Index d);
/// {I/sqrt2, s+, s-, sz/sqrt2}.
OperatorBasis ladderBasis();
/// Matrix units: diagonal |i><i| first, then off-diagonal |i><j| in row-major order.
/// For d = 2: {|0><0|, |1><1|, |0><1|, |1><0|}.
OperatorBasis matrixUnitBasis(Eigen::Index d);

/// Gram matrix G_ab = tr[B_a^dagger B_b].
Operator gramMatrix(const std::vector<Operator>& ops);

/// Coefficients r_l = tr[W_l rho] of an operator in a Hermitian basis.
struct BlochVector {
  RealVector r;
};

/// Throws NotHermitian when an expansion coefficient has imaginary part above 1e-10.
BlochVector blochExpand(const Operator& rho, const HermitianBasis& basis);
Operator blochReconstruct(const BlochVector& v, const HermitianBasis& basis);
/// Complex coefficients tr[W_l X] for arbitrary (non-Hermitian) X.
Vector<complex> basisCoefficients(const Operator& x, const HermitianBasis& basis);

/// Qubit state from a physical Bloch vector (x, y, z): (I + x sx + y sy + z sz) / 2.
Operator qubitState(double x, double y, double z);

/// Structural density-matrix check: square, Hermitian, unit trace, eigenvalues >= -tol.
void requireDensityMatrix(const Operator& rho, double tol, const char* where);

}  // namespace qcf
