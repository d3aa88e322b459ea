#pragma once

#include "qcf/spin_star.hpp"

#include <functional>
#include <string>
#include <vector>

namespace qcf {

// ---------------------------------------------------------------------------
// Time-convolutionless generator

struct TclGenerator {
  double t;
  RealMatrix matrix;  // 4x4, dF/dt F^-1
};

/// P_TCL(t) = dF/dt F^-1 for the spin-star channel. Identical to generatorL.
TclGenerator tclGenerator(const FFunctions& f, double t, double poleTol = 1e-8);

struct TclRatesClosedForm {
  double gamma1;  // coherence entry
  double gamma2;  // population entry
};

/// Scalar closed forms, valid only when the bath trace collapses to one sector
/// (h1, h2 numbers rather than operators).
TclRatesClosedForm tclClosedForm(double h1, double h2, double t);

// ---------------------------------------------------------------------------
// Laplace domain

/// fhat3(u) = 2^-N sum w u / (u^2 + 16 lambda1).
template <typename Scalar>
Scalar laplaceF3(const BathSpectrum& spec, Scalar u) {
  const double norm = std::ldexp(1.0, -spec.totalSpins);
  Scalar sum(0);
  for (const auto& s : spec.sectors) sum += s.weight * norm * u / (u * u + 16.0 * s.lambda1);
  return sum;
}

/// fhat12(u) = 2^-N sum w [u/(u^2 + 4(r1+r2)^2) + u/(u^2 + 4(r1-r2)^2)] / 2, r = sqrt(lambda).
template <typename Scalar>
Scalar laplaceF12(const BathSpectrum& spec, Scalar u) {
  const double norm = std::ldexp(1.0, -spec.totalSpins);
  Scalar sum(0);
  for (const auto& s : spec.sectors) {
    const double r1 = std::sqrt(s.lambda1);
    const double r2 = std::sqrt(s.lambda2);
    const double wp = 4.0 * (r1 + r2) * (r1 + r2);
    const double wm = 4.0 * (r1 - r2) * (r1 - r2);
    sum += 0.5 * s.weight * norm * (u / (u * u + wp) + u / (u * u + wm));
  }
  return sum;
}

struct LaplaceTransfer {
  double u;
  RealMatrix matrix;  // diag(1/u, fhat12, fhat12, fhat3)
};

LaplaceTransfer laplaceTransfer(const BathSpectrum& spec, double u);

struct NzKernelLaplace {
  double u;
  RealMatrix matrix;  // u I - Fhat^-1
};

/// Throws DomainError for u <= 0 and Error when Fhat(u) is singular.
NzKernelLaplace nzKernelLaplace(const BathSpectrum& spec, double u);

enum class NzEntry { Coherence, Population };

/// Diagonal entry u - 1/fhat(u) of the NZ kernel, for complex u (Talbot inversion).
complex nzKernelEntry(const BathSpectrum& spec, complex u, NzEntry entry);

/// The printed single-sector eta expressions, with and without the overall 2^N factor.
struct PrintedEta {
  double eta1;         // 2^N factor dropped; equals u - 1/fhat12 for one sector
  double eta2;
  double eta1Printed;  // as printed, 2^N factor kept
  double eta2Printed;
};

PrintedEta printedEta(double h1, double h2, double u, int totalSpins);

// ---------------------------------------------------------------------------
// Numerical inverse Laplace transform

struct TalbotOptions {
  int initialNodes = 16;
  int maxNodes = 16384;
  double tolerance = 1e-9;       // agreement of successive node doublings
  double oscillationBound = 0.0; // bound on |Im| of the singularities of fhat
  double shape = 10.0;           // contour scale mu = shape / t
};

struct TalbotResult {
  double value;
  int nodes;
  double change;  // |last - previous| at acceptance
};

/// Bromwich integral on the Talbot contour z(theta) = mu (theta cot theta + i nu theta),
/// mu = shape / t, nu = max(1, 1.2 * oscillationBound / mu), trapezoidal rule with
/// node doubling. Throws ConvergenceFailure when maxNodes is reached first.
TalbotResult inverseLaplaceTalbot(const std::function<complex(complex)>& fhat, double t,
                                  const TalbotOptions& options = {});

// ---------------------------------------------------------------------------
// Operator form

/// Rates of  g+ D[s+] + g- D[s-] + gz (sz rho sz - rho),  D[A] = A rho A^dag - {A^dag A, rho}/2.
struct OperatorFormRates {
  double gammaPlus;
  double gammaMinus;
  double gammaZ;
};

/// Rates from a generator diag(0, a, a, b): g+ = g- = -b/2, gz = (b - 2a)/4.
/// Throws DomainError when P deviates from that shape by more than tol.
OperatorFormRates operatorForm(const RealMatrix& p, double tol = 1e-10);
Operator applyOperatorForm(const OperatorFormRates& rates, const Operator& rho);
/// Matrix generator (Pauli basis) of the dissipator built from the rates.
RealMatrix generatorFromRates(const OperatorFormRates& rates);

// ---------------------------------------------------------------------------
// Poles and propagation

struct Pole {
  double t;
  std::string function;  // "f12" or "f3"
};

/// Zeros of f12 and f3 on (0, tEnd]: sign changes are bisected, and local
/// extrema of |f| are bisected on f' and kept when |f| <= poleTol there.
std::vector<Pole> findPoles(const FFunctions& f, double tEnd, double poleTol = 1e-8);

struct PropagationOptions {
  double poleMargin = 0.1;  // stop this far before the first pole
  double drift = 1e-8;      // max change between successive step halvings
  int initialSubsteps = 8;
  int maxHalvings = 16;
  double poleTol = 1e-8;
};

struct TclTrajectory {
  std::vector<double> times;
  std::vector<Operator> states;
  std::vector<std::string> warnings;
  bool truncated = false;
  int substeps = 0;  // RK4 steps per grid interval in the accepted run
};

/// Integrates dr/dt = P_TCL(t) r from t = 0 with rho(0) = rho0 and records the
/// state at every grid point. The grid is cut before the first generator pole.
TclTrajectory propagateTCL(const FFunctions& f, const Operator& rho0, const std::vector<double>& grid,
                           const PropagationOptions& options = {});

}  // namespace qcf
