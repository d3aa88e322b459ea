#include "qcf/operator_core.hpp"

#include <string>

namespace qcf {

namespace pauli {

Operator identity() { return Operator::Identity(2, 2); }

Operator x() {
  Operator m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Operator y() {
  Operator m(2, 2);
  m << 0, -I_unit, I_unit, 0;
  return m;
}

Operator z() {
  Operator m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Operator plus() {
  Operator m = Operator::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

Operator minus() {
  Operator m = Operator::Zero(2, 2);
  m(1, 0) = 1.0;
  return m;
}

}  // namespace pauli

Operator gramMatrix(const std::vector<Operator>& ops) {
  const auto n = static_cast<Eigen::Index>(ops.size());
  Operator g(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      g(a, b) = (ops[static_cast<std::size_t>(a)].adjoint() * ops[static_cast<std::size_t>(b)]).trace();
  return g;
}

namespace {

Eigen::Index checkedDim(const std::vector<Operator>& ops, const char* what) {
  if (ops.empty()) throw DimensionMismatch(std::string(what) + ": empty basis");
  const Eigen::Index d = ops.front().rows();
  if (static_cast<Eigen::Index>(ops.size()) != d * d)
    throw DimensionMismatch(std::string(what) + ": need d^2 operators for dimension " + std::to_string(d));
  for (const auto& op : ops)
    if (op.rows() != d || op.cols() != d)
      throw DimensionMismatch(std::string(what) + ": operators differ in dimension");
  return d;
}

void checkOrthonormal(const std::vector<Operator>& ops, double tol, const char* what) {
  const Operator g = gramMatrix(ops);
  const double dev = (g - Operator::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
  if (dev > tol) throw Error(std::string(what) + ": basis is not orthonormal (Gram deviation " + std::to_string(dev) + ")");
}

}  // namespace

HermitianBasis::HermitianBasis(std::vector<Operator> ops, double tol)
    : dim_(checkedDim(ops, "HermitianBasis")), ops_(std::move(ops)) {
  for (const auto& w : ops_)
    if (hermiticityResidual(w) > tol) throw NotHermitian("HermitianBasis: element is not Hermitian", hermiticityResidual(w));
  checkOrthonormal(ops_, tol, "HermitianBasis");
}

OperatorBasis::OperatorBasis(std::vector<Operator> ops, double tol)
    : dim_(checkedDim(ops, "OperatorBasis")), ops_(std::move(ops)) {
  checkOrthonormal(ops_, tol, "OperatorBasis");
}

HermitianBasis pauliBasis() {
  const double k = 1.0 / std::sqrt(2.0);
  return HermitianBasis({k * pauli::identity(), k * pauli::x(), k * pauli::y(), k * pauli::z()});
}

HermitianBasis gellMannBasis(Eigen::Index d) {
  if (d < 1) throw DimensionMismatch("gellMannBasis: dimension must be positive");
  std::vector<Operator> ops;
  ops.push_back(Operator::Identity(d, d) / std::sqrt(static_cast<double>(d)));
  const double k = 1.0 / std::sqrt(2.0);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index k2 = j + 1; k2 < d; ++k2) {
      Operator s = Operator::Zero(d, d);
      s(j, k2) = k;
      s(k2, j) = k;
      ops.push_back(s);
      Operator a = Operator::Zero(d, d);
      a(j, k2) = -I_unit * k;
      a(k2, j) = I_unit * k;
      ops.push_back(a);
    }
  for (Eigen::Index l = 1; l < d; ++l) {
    Operator m = Operator::Zero(d, d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(l * (l + 1)));
    for (Eigen::Index j = 0; j < l; ++j) m(j, j) = norm;
    m(l, l) = -static_cast<double>(l) * norm;
    ops.push_back(m);
  }
  return HermitianBasis(std::move(ops));
}

OperatorBasis ladderBasis() {
  const double k = 1.0 / std::sqrt(2.0);
  return OperatorBasis({k * pauli::identity(), pauli::plus(), pauli::minus(), k * pauli::z()});
}

OperatorBasis matrixUnitBasis(Eigen::Index d) {
  if (d < 1) throw DimensionMismatch("matrixUnitBasis: dimension must be positive");
  std::vector<Operator> ops;
  for (Eigen::Index i = 0; i < d; ++i) {
    Operator e = Operator::Zero(d, d);
    e(i, i) = 1.0;
    ops.push_back(e);
  }
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      if (i == j) continue;
      Operator e = Operator::Zero(d, d);
      e(i, j) = 1.0;
      ops.push_back(e);
    }
  return OperatorBasis(std::move(ops));
}

Vector<complex> basisCoefficients(const Operator& x, const HermitianBasis& basis) {
  if (x.rows() != basis.dim() || x.cols() != basis.dim())
    throw DimensionMismatch("basisCoefficients: operator dimension does not match basis");
  Vector<complex> r(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t l = 0; l < basis.size(); ++l) r(static_cast<Eigen::Index>(l)) = (basis[l] * x).trace();
  return r;
}

BlochVector blochExpand(const Operator& rho, const HermitianBasis& basis) {
  const Vector<complex> c = basisCoefficients(rho, basis);
  const double im = c.imag().cwiseAbs().maxCoeff();
  if (im > 1e-10) throw NotHermitian("blochExpand: operator is not Hermitian", im);
  return {c.real()};
}

Operator blochReconstruct(const BlochVector& v, const HermitianBasis& basis) {
  if (v.r.size() != static_cast<Eigen::Index>(basis.size()))
    throw DimensionMismatch("blochReconstruct: coefficient count does not match basis");
  Operator out = Operator::Zero(basis.dim(), basis.dim());
  for (std::size_t l = 0; l < basis.size(); ++l) out += v.r(static_cast<Eigen::Index>(l)) * basis[l];
  return out;
}

Operator qubitState(double x, double y, double z) {
  return 0.5 * (pauli::identity() + x * pauli::x() + y * pauli::y() + z * pauli::z());
}

void requireDensityMatrix(const Operator& rho, double tol, const char* where) {
  if (rho.rows() != rho.cols()) throw InvalidState(std::string(where) + ": state is not square");
  const double herm = hermiticityResidual(rho);
  if (herm > tol) throw InvalidState(std::string(where) + ": state is not Hermitian");
  const complex tr = rho.trace();
  if (std::abs(tr - 1.0) > tol) throw InvalidState(std::string(where) + ": state trace is " + std::to_string(tr.real()));
  const auto eig = hermitianEigen(rho, tol);
  if (eig.values.size() > 0 && eig.values(eig.values.size() - 1) < -tol)
    throw InvalidState(std::string(where) + ": state has negative eigenvalue " +
                       std::to_string(eig.values(eig.values.size() - 1)));
}

}  // namespace qcf
