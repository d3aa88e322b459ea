#include "qcf/oracles.hpp"

#include <cmath>

namespace qcf::oracle {

namespace {

Operator embedSingleSpin(const Operator& op, int site, int n) {
  Operator out = Operator::Identity(1, 1);
  for (int j = 0; j < n; ++j) out = tensorProduct(out, j == site ? op : pauli::identity());
  return out;
}

}  // namespace

DenseBath denseBath(const LayerConfig& cfg) {
  cfg.validate();
  const int n = cfg.totalSpins();
  if (n > 8) throw ModelLimit("oracle::denseBath: N = " + std::to_string(n) + " exceeds 8");
  const Eigen::Index d = Eigen::Index{1} << n;
  DenseBath out{Operator::Zero(d, d), Operator::Zero(d, d)};
  int site = 0;
  for (const auto& layer : cfg.layers)
    for (int k = 0; k < layer.spins; ++k, ++site) out.xiPlus += layer.coupling * embedSingleSpin(pauli::plus(), site, n);
  out.xiMinus = out.xiPlus.adjoint();
  return out;
}

JointEvolution::JointEvolution(const LayerConfig& cfg) : n_(cfg.totalSpins()), dimB_(Eigen::Index{1} << n_) {
  const DenseBath bath = denseBath(cfg);
  const Operator h = 2.0 * (tensorProduct(pauli::plus(), bath.xiMinus) + tensorProduct(pauli::minus(), bath.xiPlus));
  solver_.compute(h);
  if (solver_.info() != Eigen::Success) throw ConvergenceFailure("oracle::JointEvolution: eigensolver failed");
}

std::vector<Operator> JointEvolution::reducedStates(double t, const std::vector<Operator>& inputs) const {
  const auto& v = solver_.eigenvectors();
  Vector<complex> phases(v.cols());
  for (Eigen::Index i = 0; i < v.cols(); ++i) phases(i) = std::exp(-I_unit * (solver_.eigenvalues()(i) * t));
  const Operator u = v * phases.asDiagonal() * v.adjoint();
  const Operator bathState = Operator::Identity(dimB_, dimB_) / static_cast<double>(dimB_);
  std::vector<Operator> out;
  for (const auto& x : inputs) {
    const Operator joint = u * tensorProduct(x, bathState) * u.adjoint();
    out.push_back(partialTrace(joint, 2, dimB_, Keep::First));
  }
  return out;
}

Operator JointEvolution::reducedState(double t, const Operator& rho0) const { return reducedStates(t, {rho0}).front(); }

std::vector<Operator> JointEvolution::images(double t) const { return reducedStates(t, pauliBasis().operators()); }

CosineTraces cosineTraces(const LayerConfig& cfg, double t, BathOperators which) {
  const int n = cfg.totalSpins();
  const Eigen::Index d = Eigen::Index{1} << n;
  Operator a = Operator::Zero(d, d), b = Operator::Zero(d, d);
  if (which == BathOperators::Coupled) {
    const DenseBath bath = denseBath(cfg);
    a = bath.xiPlus * bath.xiMinus;
    b = bath.xiMinus * bath.xiPlus;
  } else {
    if (n > 8) throw ModelLimit("oracle::cosineTraces: N exceeds 8");
    int site = 0;
    for (const auto& layer : cfg.layers) {
      Operator jp = Operator::Zero(d, d);
      for (int k = 0; k < layer.spins; ++k, ++site) jp += embedSingleSpin(pauli::plus(), site, n);
      const double a2 = layer.coupling * layer.coupling;
      a += a2 * jp * jp.adjoint();
      b += a2 * jp.adjoint() * jp;
    }
  }
  auto cosine = [&](const Operator& m, double scale) {
    Eigen::SelfAdjointEigenSolver<Operator> es(m);
    Vector<complex> c(d);
    for (Eigen::Index i = 0; i < d; ++i) c(i) = std::cos(scale * t * std::sqrt(std::max(0.0, es.eigenvalues()(i))));
    return Operator(es.eigenvectors() * c.asDiagonal() * es.eigenvectors().adjoint());
  };
  const Operator ca = cosine(a, 2.0), cb = cosine(b, 2.0), ca4 = cosine(a, 4.0);
  return {(ca * cb).trace().real() / static_cast<double>(d), ca4.trace().real() / static_cast<double>(d)};
}

double standardChoiMinEigenvalue(const TransferMatrix& f) {
  const Eigen::Index d = f.basis.dim();
  Operator choi = Operator::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      Operator e = Operator::Zero(d, d);
      e(i, j) = 1.0;
      choi += tensorProduct(e, applyTransfer(f, e));
    }
  Eigen::SelfAdjointEigenSolver<Operator> es(choi, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

RealVector laplaceQuadrature(const std::function<RealVector(double)>& g, double u, double panelWidth) {
  if (!(u > 0.0)) throw DomainError("oracle::laplaceQuadrature: u must be positive");
  // Golub-Welsch nodes and weights for 20-point Gauss-Legendre on [-1, 1].
  constexpr int kOrder = 20;
  RealMatrix jacobi = RealMatrix::Zero(kOrder, kOrder);
  for (int k = 1; k < kOrder; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k - 1, k) = beta;
    jacobi(k, k - 1) = beta;
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(jacobi);
  const RealVector nodes = es.eigenvalues();
  const RealVector weights = 2.0 * es.eigenvectors().row(0).array().square().transpose();

  const double end = 40.0 / u;
  const auto panels = static_cast<long>(std::ceil(end / panelWidth));
  const double h = end / static_cast<double>(panels);
  RealVector sum;
  for (long p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    for (int k = 0; k < kOrder; ++k) {
      const double t = mid + 0.5 * h * nodes(k);
      const RealVector term = (0.5 * h * weights(k) * std::exp(-u * t)) * g(t);
      if (sum.size() == 0) sum = RealVector::Zero(term.size());
      sum += term;
    }
  }
  return sum;
}

double laplaceQuadrature(const std::function<double(double)>& g, double u, double panelWidth) {
  return laplaceQuadrature([&](double t) { return RealVector::Constant(1, g(t)); }, u, panelWidth)(0);
}

double paperKrausResidualSymbolic(double c3, double t, GammaVariant v) {
  const double g2 = gammaSquared(c3, t, v);
  if (g2 < 0.0) throw DomainError("oracle::paperKrausResidualSymbolic: Gamma^2 < 0");
  const double g = std::sqrt(g2), s = std::sin(t), c = std::cos(t), q = std::sqrt(2.0) / 4.0;
  // Coefficients on (W0, W1, W2, W3) of the printed operators.
  const complex coeff[4][4] = {
      {0.5 * g * s, 0.5 * I_unit * g * c, 0.0, -q},
      {-0.5 * g * c, 0.5 * I_unit * g * s, q, 0.0},
      {0.5 * g * s, 0.5 * I_unit * g * c, 0.0, q},
      {0.5 * g * c, -0.5 * I_unit * g * s, q, 0.0},
  };
  const double r2 = 1.0 / std::sqrt(2.0);
  complex s0 = 0.0;
  complex sv[3] = {0.0, 0.0, 0.0};
  for (const auto& m : coeff) {
    const complex x0 = m[0] * r2;
    const complex x[3] = {m[1] * r2, m[2] * r2, m[3] * r2};
    s0 += std::norm(x0) + std::norm(x[0]) + std::norm(x[1]) + std::norm(x[2]);
    for (int k = 0; k < 3; ++k) sv[k] += std::conj(x0) * x[k] + x0 * std::conj(x[k]);
    // i (x* cross x)
    sv[0] += I_unit * (std::conj(x[1]) * x[2] - std::conj(x[2]) * x[1]);
    sv[1] += I_unit * (std::conj(x[2]) * x[0] - std::conj(x[0]) * x[2]);
    sv[2] += I_unit * (std::conj(x[0]) * x[1] - std::conj(x[1]) * x[0]);
  }
  return std::sqrt(2.0 * (std::norm(s0 - 1.0) + std::norm(sv[0]) + std::norm(sv[1]) + std::norm(sv[2])));
}

double paperKrausResidualClosedForm(double c3, double t, GammaVariant v) {
  const double g2 = gammaSquared(c3, t, v);
  return std::sqrt(2.0) * std::abs(0.75 - 0.5 * (1.0 - g2) - 1.0);
}

}  // namespace qcf::oracle
