#include "qcf/kernels.hpp"

#include <cmath>
#include <numbers>

namespace qcf {

TclGenerator tclGenerator(const FFunctions& f, double t, double poleTol) {
  return {t, generatorL(f, t, poleTol).matrix};
}

TclRatesClosedForm tclClosedForm(double h1, double h2, double t) {
  return {-2.0 * (h1 * std::tan(2.0 * h1 * t) + h2 * std::tan(2.0 * h2 * t)),
          -4.0 * h1 * std::tan(4.0 * h1 * t)};
}

LaplaceTransfer laplaceTransfer(const BathSpectrum& spec, double u) {
  if (!(u > 0.0)) throw DomainError("laplaceTransfer: u must be positive");
  const double f12 = laplaceF12(spec, u);
  RealMatrix m = RealMatrix::Zero(4, 4);
  m.diagonal() << 1.0 / u, f12, f12, laplaceF3(spec, u);
  return {u, m};
}

NzKernelLaplace nzKernelLaplace(const BathSpectrum& spec, double u) {
  const LaplaceTransfer fhat = laplaceTransfer(spec, u);
  const RealVector d = fhat.matrix.diagonal();
  if ((d.cwiseAbs().array() == 0.0).any()) throw Error("nzKernelLaplace: Laplace transfer matrix is singular");
  RealMatrix m = RealMatrix::Zero(4, 4);
  for (Eigen::Index k = 0; k < 4; ++k) m(k, k) = u - 1.0 / d(k);
  m(0, 0) = 0.0;  // u - 1/(1/u)
  return {u, m};
}

complex nzKernelEntry(const BathSpectrum& spec, complex u, NzEntry entry) {
  const complex fhat = entry == NzEntry::Coherence ? laplaceF12(spec, u) : laplaceF3(spec, u);
  return u - 1.0 / fhat;
}

PrintedEta printedEta(double h1, double h2, double u, int totalSpins) {
  const double a = h1 * h1, b = h2 * h2;
  const double ratio1 = (std::pow(u, 4) + 8.0 * (a + b) * u * u + 16.0 * (a - b) * (a - b)) /
                        (std::pow(u, 3) + 4.0 * (a + b) * u);
  const double ratio2 = (u * u + 16.0 * a) / u;
  const double scale = std::ldexp(1.0, totalSpins);
  return {u - ratio1, u - ratio2, u - scale * ratio1, u - scale * ratio2};
}

TalbotResult inverseLaplaceTalbot(const std::function<complex(complex)>& fhat, double t,
                                  const TalbotOptions& options) {
  if (!(t > 0.0)) throw DomainError("inverseLaplaceTalbot: t must be positive");
  if (options.initialNodes < 2) throw DomainError("inverseLaplaceTalbot: need at least 2 nodes");
  const double mu = options.shape / t;
  const double nu = std::max(1.0, 1.2 * options.oscillationBound / mu);

  auto trapezoid = [&](int m) {
    const complex g0 = std::exp(mu * t) * fhat(complex(mu, 0.0)) * mu * nu;
    double sum = 0.5 * g0.real();
    for (int k = 1; k < m; ++k) {
      const double theta = k * std::numbers::pi / m;
      const double cot = 1.0 / std::tan(theta);
      const complex z = mu * complex(theta * cot, nu * theta);
      const complex dz = mu * complex(cot - theta / (std::sin(theta) * std::sin(theta)), nu);
      sum += (std::exp(z * t) * fhat(z) * dz).imag();
    }
    return sum / m;
  };

  int m = options.initialNodes;
  double previous = trapezoid(m);
  while (2 * m <= options.maxNodes) {
    m *= 2;
    const double current = trapezoid(m);
    const double change = std::abs(current - previous);
    if (std::isfinite(current) && change <= options.tolerance * std::max(1.0, std::abs(current)))
      return {current, m, change};
    previous = current;
  }
  throw ConvergenceFailure("inverseLaplaceTalbot: no convergence at t = " + std::to_string(t) + " with " +
                           std::to_string(m) + " nodes");
}

OperatorFormRates operatorForm(const RealMatrix& p, double tol) {
  if (p.rows() != 4 || p.cols() != 4) throw DomainError("operatorForm: generator must be 4x4");
  RealMatrix off = p;
  off.diagonal().setZero();
  const double shape = std::max({off.cwiseAbs().maxCoeff(), std::abs(p(0, 0)), std::abs(p(1, 1) - p(2, 2))});
  if (shape > tol) throw DomainError("operatorForm: generator is not of the form diag(0, a, a, b)");
  const double a = 0.5 * (p(1, 1) + p(2, 2));
  const double b = p(3, 3);
  return {-0.5 * b, -0.5 * b, 0.25 * (b - 2.0 * a)};
}

Operator applyOperatorForm(const OperatorFormRates& rates, const Operator& rho) {
  const Operator sp = pauli::plus(), sm = pauli::minus(), sz = pauli::z();
  auto dissipator = [&](const Operator& a) {
    const Operator ada = a.adjoint() * a;
    return Operator(a * rho * a.adjoint() - 0.5 * (ada * rho + rho * ada));
  };
  return rates.gammaPlus * dissipator(sp) + rates.gammaMinus * dissipator(sm) +
         rates.gammaZ * (sz * rho * sz - rho);
}

RealMatrix generatorFromRates(const OperatorFormRates& rates) {
  const HermitianBasis w = pauliBasis();
  std::vector<Operator> images;
  for (const auto& op : w.operators()) images.push_back(applyOperatorForm(rates, op));
  return transferFromMap(images, w).matrix;
}

namespace {

double bisect(const std::function<double(double)>& g, double lo, double hi) {
  double glo = g(lo);
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm > 0) == (glo > 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<Pole> findPoles(const FFunctions& f, double tEnd, double poleTol) {
  std::vector<Pole> poles;
  if (!(tEnd > 0.0)) return poles;
  const double freq = std::max(1.0, f.spectrum().maxFrequency());
  const double step = std::min(1e-2, 0.05 / freq);
  const auto count = static_cast<long>(std::ceil(tEnd / step));

  struct Channel {
    const char* name;
    std::function<double(double)> value;
    std::function<double(double)> slope;
  };
  const Channel channels[] = {
      {"f12", [&](double t) { return f(t).f12; }, [&](double t) { return f(t).df12; }},
      {"f3", [&](double t) { return f(t).f3; }, [&](double t) { return f(t).df3; }},
  };
  for (const auto& ch : channels) {
    double t0 = 0.0, g0 = ch.value(0.0), s0 = ch.slope(0.0);
    for (long i = 1; i <= count; ++i) {
      const double t1 = std::min(tEnd, i * step);
      const double g1 = ch.value(t1), s1 = ch.slope(t1);
      if (g1 == 0.0) {
        poles.push_back({t1, ch.name});
      } else if (g0 != 0.0 && (g0 > 0) != (g1 > 0)) {
        poles.push_back({bisect(ch.value, t0, t1), ch.name});
      } else if (t0 > 0.0 && (s0 > 0) != (s1 > 0) && ((g1 > 0) == (s1 > 0))) {
        // |f| has a local minimum in (t0, t1); a double zero shows up only here.
        const double tm = bisect(ch.slope, t0, t1);
        if (std::abs(ch.value(tm)) <= poleTol) poles.push_back({tm, ch.name});
      }
      t0 = t1;
      g0 = g1;
      s0 = s1;
    }
  }
  std::sort(poles.begin(), poles.end(), [](const Pole& a, const Pole& b) { return a.t < b.t; });
  return poles;
}

TclTrajectory propagateTCL(const FFunctions& f, const Operator& rho0, const std::vector<double>& grid,
                           const PropagationOptions& options) {
  if (grid.empty()) throw DomainError("propagateTCL: empty time grid");
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (grid[i] < 0.0 || (i > 0 && grid[i] <= grid[i - 1]))
      throw DomainError("propagateTCL: grid must be non-negative and strictly increasing");
  requireDensityMatrix(rho0, 1e-10, "propagateTCL");

  TclTrajectory out;
  std::vector<double> times = grid;
  const auto poles = findPoles(f, grid.back(), options.poleTol);
  if (!poles.empty()) {
    const double limit = poles.front().t - options.poleMargin;
    while (!times.empty() && times.back() > limit) times.pop_back();
    out.truncated = true;
    out.warnings.push_back("generator pole of " + poles.front().function + " at t = " +
                           std::to_string(poles.front().t) + "; grid truncated at t <= " + std::to_string(limit));
    if (times.empty()) throw PoleEncountered(poles.front().function, poles.front().t, 0.0);
  }

  const HermitianBasis w = pauliBasis();
  const RealVector r0 = blochExpand(rho0, w).r;
  auto rhs = [&](double t, const RealVector& r) -> RealVector {
    return generatorL(f, t, options.poleTol).matrix * r;
  };

  auto integrate = [&](int substeps) {
    std::vector<RealVector> states;
    RealVector r = r0;
    double t = 0.0;
    for (double target : times) {
      const double h = (target - t) / substeps;
      for (int s = 0; s < substeps && h > 0.0; ++s) {
        const RealVector k1 = rhs(t, r);
        const RealVector k2 = rhs(t + 0.5 * h, r + 0.5 * h * k1);
        const RealVector k3 = rhs(t + 0.5 * h, r + 0.5 * h * k2);
        const RealVector k4 = rhs(t + h, r + h * k3);
        r += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
      }
      t = target;
      states.push_back(r);
    }
    return states;
  };

  int substeps = std::max(1, options.initialSubsteps);
  std::vector<RealVector> coarse = integrate(substeps);
  for (int halving = 0;; ++halving) {
    if (halving >= options.maxHalvings)
      throw ConvergenceFailure("propagateTCL: step halving did not reach the drift tolerance");
    substeps *= 2;
    std::vector<RealVector> fine = integrate(substeps);
    double drift = 0.0;
    for (std::size_t i = 0; i < fine.size(); ++i) drift = std::max(drift, (fine[i] - coarse[i]).cwiseAbs().maxCoeff());
    coarse = std::move(fine);
    if (drift < options.drift) break;
  }

  out.times = times;
  out.substeps = substeps;
  for (const auto& r : coarse) out.states.push_back(blochReconstruct({r}, w));
  return out;
}

}  // namespace qcf
