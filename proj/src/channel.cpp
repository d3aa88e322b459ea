#include "qcf/channel.hpp"

#include <Eigen/SVD>

#include <limits>

namespace qcf {

namespace {

Operator buildCouplingTensor(const HermitianBasis& w, const OperatorBasis& beta) {
  const auto n2 = static_cast<Eigen::Index>(w.size());
  Operator t(n2 * n2, n2 * n2);
  for (Eigen::Index k = 0; k < n2; ++k)
    for (Eigen::Index l = 0; l < n2; ++l)
      for (Eigen::Index a = 0; a < n2; ++a) {
        const Operator left = w[static_cast<std::size_t>(k)] * beta[static_cast<std::size_t>(a)] *
                              w[static_cast<std::size_t>(l)];
        for (Eigen::Index b = 0; b < n2; ++b)
          t(k * n2 + l, a * n2 + b) = (left * beta[static_cast<std::size_t>(b)].adjoint()).trace();
      }
  return t;
}

}  // namespace

RepresentationMap::RepresentationMap(HermitianBasis hermitian, OperatorBasis operators)
    : w_(std::move(hermitian)), beta_(std::move(operators)) {
  if (w_.dim() != beta_.dim()) throw DimensionMismatch("RepresentationMap: bases differ in dimension");
  t_ = buildCouplingTensor(w_, beta_);
  lu_.compute(t_);
  const Eigen::JacobiSVD<Operator> svd(t_);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0)) throw Error("RepresentationMap: coupling tensor is singular");
  condition_ = sv(0) / smin;
}

ChoiMatrix RepresentationMap::choiFromTransfer(const TransferMatrix& f) const {
  const auto n2 = static_cast<Eigen::Index>(w_.size());
  if (f.matrix.rows() != n2 || f.matrix.cols() != n2)
    throw DimensionMismatch("choiFromTransfer: transfer matrix size does not match basis");
  Vector<complex> rhs(n2 * n2);
  for (Eigen::Index k = 0; k < n2; ++k)
    for (Eigen::Index l = 0; l < n2; ++l) rhs(k * n2 + l) = f.matrix(k, l);
  const Vector<complex> s = lu_.solve(rhs);
  Operator m(n2, n2);
  for (Eigen::Index a = 0; a < n2; ++a)
    for (Eigen::Index b = 0; b < n2; ++b) m(a, b) = s(a * n2 + b);
  ChoiMatrix out{(m + m.adjoint()) / 2.0, beta_, hermiticityResidual(m)};
  return out;
}

TransferMatrix RepresentationMap::transferFromChoi(const ChoiMatrix& s, double imaginaryTol) const {
  const auto n2 = static_cast<Eigen::Index>(w_.size());
  if (s.matrix.rows() != n2 || s.matrix.cols() != n2)
    throw DimensionMismatch("transferFromChoi: Choi matrix size does not match basis");
  Vector<complex> vec(n2 * n2);
  for (Eigen::Index a = 0; a < n2; ++a)
    for (Eigen::Index b = 0; b < n2; ++b) vec(a * n2 + b) = s.matrix(a, b);
  const Vector<complex> f = t_ * vec;
  TransferMatrix out{RealMatrix(n2, n2), w_, 0.0};
  for (Eigen::Index k = 0; k < n2; ++k)
    for (Eigen::Index l = 0; l < n2; ++l) {
      out.matrix(k, l) = f(k * n2 + l).real();
      out.imaginaryResidue = std::max(out.imaginaryResidue, std::abs(f(k * n2 + l).imag()));
    }
  if (out.imaginaryResidue > imaginaryTol)
    throw NotHermiticityPreserving("transferFromChoi: transfer matrix has imaginary part", out.imaginaryResidue);
  return out;
}

const RepresentationMap& qubitRepresentation() {
  static const RepresentationMap map(pauliBasis(), ladderBasis());
  return map;
}

const RepresentationMap& qubitMatrixUnitRepresentation() {
  static const RepresentationMap map(pauliBasis(), matrixUnitBasis(2));
  return map;
}

TransferMatrix transferFromMap(const std::vector<Operator>& images, const HermitianBasis& basis,
                               double imaginaryTol) {
  const auto n2 = static_cast<Eigen::Index>(basis.size());
  if (static_cast<Eigen::Index>(images.size()) != n2)
    throw DimensionMismatch("transferFromMap: need one image per basis element");
  TransferMatrix out{RealMatrix(n2, n2), basis, 0.0};
  for (Eigen::Index l = 0; l < n2; ++l) {
    const Operator& img = images[static_cast<std::size_t>(l)];
    if (img.rows() != basis.dim() || img.cols() != basis.dim())
      throw DimensionMismatch("transferFromMap: image dimension does not match basis");
    for (Eigen::Index k = 0; k < n2; ++k) {
      const complex v = (basis[static_cast<std::size_t>(k)] * img).trace();
      out.matrix(k, l) = v.real();
      out.imaginaryResidue = std::max(out.imaginaryResidue, std::abs(v.imag()));
    }
  }
  if (out.imaginaryResidue > imaginaryTol)
    throw NotHermiticityPreserving("transferFromMap: map does not preserve Hermiticity", out.imaginaryResidue);
  return out;
}

Operator applyTransfer(const TransferMatrix& f, const Operator& rho) {
  const Vector<complex> r = basisCoefficients(rho, f.basis);
  const Vector<complex> fr = f.matrix.cast<complex>() * r;
  Operator out = Operator::Zero(f.basis.dim(), f.basis.dim());
  for (std::size_t k = 0; k < f.basis.size(); ++k) out += fr(static_cast<Eigen::Index>(k)) * f.basis[k];
  return out;
}

namespace {

bool sameOperators(const std::vector<Operator>& a, const std::vector<Operator>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].rows() != b[i].rows() || !a[i].isApprox(b[i], 1e-15)) return false;
  return true;
}

const RepresentationMap* cachedQubitMap(const HermitianBasis& w, const OperatorBasis& beta) {
  if (w.dim() != 2 || !sameOperators(w.operators(), pauliBasis().operators())) return nullptr;
  if (sameOperators(beta.operators(), ladderBasis().operators())) return &qubitRepresentation();
  if (sameOperators(beta.operators(), matrixUnitBasis(2).operators())) return &qubitMatrixUnitRepresentation();
  return nullptr;
}

}  // namespace

OperatorBasis defaultOperatorBasis(Eigen::Index d) { return d == 2 ? ladderBasis() : matrixUnitBasis(d); }

ChoiMatrix choiFromTransfer(const TransferMatrix& f, const OperatorBasis& beta) {
  if (const auto* map = cachedQubitMap(f.basis, beta)) return map->choiFromTransfer(f);
  return RepresentationMap(f.basis, beta).choiFromTransfer(f);
}

ChoiMatrix choiFromTransfer(const TransferMatrix& f) {
  return choiFromTransfer(f, defaultOperatorBasis(f.basis.dim()));
}

TransferMatrix transferFromChoi(const ChoiMatrix& s, const HermitianBasis& w) {
  if (const auto* map = cachedQubitMap(w, s.basis)) return map->transferFromChoi(s);
  return RepresentationMap(w, s.basis).transferFromChoi(s);
}

TransferMatrix transferFromChoi(const ChoiMatrix& s) { return transferFromChoi(s, gellMannBasis(s.basis.dim())); }

KrausSet krausFromChoi(const ChoiMatrix& s, double tol) {
  const auto eig = hermitianEigen(s.matrix);
  KrausSet out;
  out.truncation = tol;
  const Eigen::Index n = eig.values.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lambda = eig.values(i);
    if (lambda < -tol) throw NotCompletelyPositive("krausFromChoi: Choi matrix has a negative eigenvalue", lambda);
    if (lambda <= tol) {
      out.droppedEigenvalues.push_back(lambda);
      continue;
    }
    Operator m = Operator::Zero(s.basis.dim(), s.basis.dim());
    for (Eigen::Index a = 0; a < n; ++a) m += eig.vectors(a, i) * s.basis[static_cast<std::size_t>(a)];
    out.operators.push_back(std::sqrt(lambda) * m);
    out.weights.push_back(lambda);
  }
  return out;
}

CpVerdict isCompletelyPositive(const ChoiMatrix& s, double tol) {
  const auto eig = hermitianEigen(s.matrix);
  const double minEig = eig.values(eig.values.size() - 1);
  return {minEig >= -tol, minEig};
}

TpVerdict isTracePreserving(const std::vector<Operator>& ops, double tol) {
  if (ops.empty()) return {false, std::numeric_limits<double>::infinity()};
  const Eigen::Index d = ops.front().rows();
  Operator sum = Operator::Zero(d, d);
  for (const auto& m : ops) sum += m.adjoint() * m;
  const double residual = (sum - Operator::Identity(d, d)).norm();
  return {residual <= tol, residual};
}

TpVerdict isTracePreserving(const KrausSet& k, double tol) { return isTracePreserving(k.operators, tol); }

Operator applyKraus(const std::vector<Operator>& ops, const Operator& rho) {
  Operator out = Operator::Zero(rho.rows(), rho.cols());
  for (const auto& m : ops) {
    if (m.cols() != rho.rows()) throw DimensionMismatch("applyKraus: operator dimension does not match state");
    out += m * rho * m.adjoint();
  }
  return out;
}

Operator applyKraus(const KrausSet& k, const Operator& rho) { return applyKraus(k.operators, rho); }

Operator applyGenerator(const ChoiMatrix& r, const Operator& rho) {
  if (rho.rows() != r.basis.dim() || rho.cols() != r.basis.dim())
    throw DimensionMismatch("applyGenerator: state dimension does not match basis");
  Operator out = Operator::Zero(rho.rows(), rho.cols());
  for (std::size_t a = 0; a < r.basis.size(); ++a) {
    const Operator left = r.basis[a] * rho;
    for (std::size_t b = 0; b < r.basis.size(); ++b) {
      const complex c = r.matrix(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (c == 0.0) continue;
      out += c * left * r.basis[b].adjoint();
    }
  }
  return out;
}

std::vector<Operator> krausImages(const std::vector<Operator>& ops, const HermitianBasis& basis) {
  std::vector<Operator> images;
  images.reserve(basis.size());
  for (const auto& w : basis.operators()) images.push_back(applyKraus(ops, w));
  return images;
}

}  // namespace qcf
