#include "qcf/cnot_discord.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace qcf {

Operator cnotHamiltonian() {
  const Operator id = pauli::identity();
  const Operator z = pauli::z();
  return tensorProduct(pauli::x(), Operator((id - z) / 2.0)) + tensorProduct(id, Operator((id + z) / 2.0));
}

Operator cnotUnitary(double t) {
  const complex phase = std::exp(-I_unit * t);
  Operator u = Operator::Zero(4, 4);
  u(0, 0) = phase;
  u(2, 2) = phase;
  u(1, 1) = std::cos(t);
  u(3, 3) = std::cos(t);
  u(1, 3) = -I_unit * std::sin(t);
  u(3, 1) = -I_unit * std::sin(t);
  return u;
}

Operator cnotUnitaryExp(double t) {
  return matrixFunction(cnotHamiltonian(), [t](double e) { return std::exp(-I_unit * (e * t)); });
}

std::array<double, 4> BellDiagonalState::eigenvalues() const {
  const auto [c1, c2, c3] = c;
  return {(1 - c1 - c2 - c3) / 4, (1 - c1 + c2 + c3) / 4, (1 + c1 - c2 + c3) / 4, (1 + c1 + c2 - c3) / 4};
}

bool BellDiagonalState::valid(double tol) const {
  for (double l : eigenvalues())
    if (!(l >= -tol)) return false;
  return true;
}

void BellDiagonalState::require(double tol) const {
  if (!valid(tol))
    throw InvalidState("Bell-diagonal coefficients (" + std::to_string(c[0]) + ", " + std::to_string(c[1]) +
                       ", " + std::to_string(c[2]) + ") do not give a positive state");
}

Operator jointState(const BellDiagonalState& s) {
  s.require();
  const Operator sig[3] = {pauli::x(), pauli::y(), pauli::z()};
  Operator rho = Operator::Identity(4, 4);
  for (int i = 0; i < 3; ++i) rho += s.c[static_cast<std::size_t>(i)] * tensorProduct(sig[i], sig[i]);
  return rho / 4.0;
}

Operator reducedEvolved(double c3, double t) {
  const double pop = c3 * (1.0 - std::cos(2.0 * t));
  const double coh = c3 * std::sin(2.0 * t);
  Operator rho(2, 2);
  rho << 2.0 + pop, -I_unit * coh, I_unit * coh, 2.0 - pop;
  return rho / 4.0;
}

TransferMatrix pinMapTransfer(double c3, double t) {
  const HermitianBasis w = pauliBasis();
  const Operator rhoS = reducedEvolved(c3, t);
  std::vector<Operator> images;
  for (std::size_t l = 0; l < w.size(); ++l) images.push_back(w[l].trace() * rhoS);
  return transferFromMap(images, w);
}

std::string toString(GammaVariant v) {
  switch (v) {
    case GammaVariant::Printed: return "sin_t";
    case GammaVariant::SinSquared: return "sin2_t";
    case GammaVariant::SinDouble: return "sin_2t";
  }
  return "?";
}

double gammaSquared(double c3, double t, GammaVariant v) {
  switch (v) {
    case GammaVariant::Printed: return 1.0 - c3 * std::sin(t);
    case GammaVariant::SinSquared: return 1.0 - c3 * std::sin(t) * std::sin(t);
    case GammaVariant::SinDouble: return 1.0 - c3 * std::sin(2.0 * t);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<Operator> paperKraus(double c3, double t, GammaVariant v) {
  const double g2 = gammaSquared(c3, t, v);
  if (g2 < 0.0) throw DomainError("paperKraus: Gamma^2 = " + std::to_string(g2) + " is negative");
  const double g = std::sqrt(g2);
  const double s = std::sin(t), c = std::cos(t);
  const HermitianBasis w = pauliBasis();
  const double q = std::sqrt(2.0) / 4.0;
  return {
      0.5 * g * s * w[0] + 0.5 * I_unit * g * c * w[1] - q * w[3],
      -0.5 * g * c * w[0] + 0.5 * I_unit * g * s * w[1] + q * w[2],
      0.5 * g * s * w[0] + 0.5 * I_unit * g * c * w[1] + q * w[3],
      0.5 * g * c * w[0] - 0.5 * I_unit * g * s * w[1] + q * w[2],
  };
}

namespace {

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

double entropyOfQubit(const Operator& rho) {
  const double a = rho(0, 0).real(), d = rho(1, 1).real();
  const double gap = std::sqrt((a - d) * (a - d) + 4.0 * std::norm(rho(0, 1)));
  return -xlog2x(0.5 * (a + d + gap)) - xlog2x(0.5 * (a + d - gap));
}

}  // namespace

double entropyBits(const Operator& rho) {
  if (rho.rows() == 2) return entropyOfQubit(rho);
  const auto eig = hermitianEigen(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) s -= xlog2x(eig.values(i));
  return s;
}

DiscordResult discordClosedForm(const BellDiagonalState& s) {
  s.require();
  DiscordResult out;
  out.mutualInformation = 2.0;
  for (double l : s.eigenvalues()) out.mutualInformation += xlog2x(std::max(l, 0.0));
  const double c = std::max({std::abs(s.c[0]), std::abs(s.c[1]), std::abs(s.c[2])});
  out.classicalCorrelation = 0.5 * (xlog2x(1.0 + c) + xlog2x(1.0 - c));
  out.discord = out.mutualInformation - out.classicalCorrelation;
  return out;
}

namespace {

struct Measurement {
  const Operator& rho;
  Operator sx, sy, sz, id;

  explicit Measurement(const Operator& r)
      : rho(r), sx(pauli::x()), sy(pauli::y()), sz(pauli::z()), id(pauli::identity()) {}

  // Average entropy of the second qubit after a projective measurement of the
  // first along (theta, phi).
  double conditionalEntropy(double theta, double phi) const {
    const double nx = std::sin(theta) * std::cos(phi), ny = std::sin(theta) * std::sin(phi), nz = std::cos(theta);
    const Operator nsig = nx * sx + ny * sy + nz * sz;
    double h = 0.0;
    for (double sign : {1.0, -1.0}) {
      const Operator proj = tensorProduct(Operator((id + sign * nsig) / 2.0), id);
      const Operator post = partialTrace(proj * rho, 2, 2, Keep::Second);
      const double p = post.trace().real();
      if (p > 1e-15) h += p * entropyOfQubit(post / p);
    }
    return h;
  }
};

}  // namespace

DiscordResult discordNumerical(const Operator& rhoAB, const DiscordOptions& options) {
  if (rhoAB.rows() != 4 || rhoAB.cols() != 4) throw DimensionMismatch("discordNumerical: expected a 4x4 state");
  requireDensityMatrix(rhoAB, 1e-10, "discordNumerical");
  if (options.polarPoints < 1 || options.azimuthPoints < 1 || options.starts < 1)
    throw DomainError("discordNumerical: grid sizes and start count must be positive");

  const double pi = std::numbers::pi;
  const Measurement m(rhoAB);
  const Operator rhoA = partialTrace(rhoAB, 2, 2, Keep::First);
  const Operator rhoB = partialTrace(rhoAB, 2, 2, Keep::Second);
  const double sA = entropyOfQubit(rhoA), sB = entropyOfQubit(rhoB);

  const double dTheta = pi / options.polarPoints;
  const double dPhi = 2.0 * pi / options.azimuthPoints;
  double bestTheta = 0.0, bestPhi = 0.0, best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < options.polarPoints; ++i)
    for (int j = 0; j < options.azimuthPoints; ++j) {
      const double th = (i + 0.5) * dTheta, ph = j * dPhi;
      const double h = m.conditionalEntropy(th, ph);
      if (h < best) {
        best = h;
        bestTheta = th;
        bestPhi = ph;
      }
    }

  std::vector<std::pair<double, double>> starts{{bestTheta, bestPhi}};
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (static_cast<int>(starts.size()) < options.starts)
    starts.emplace_back(std::acos(1.0 - 2.0 * unit(rng)), 2.0 * pi * unit(rng));

  for (auto [th, ph] : starts) {
    double value = m.conditionalEntropy(th, ph);
    double step = std::max(dTheta, dPhi);
    while (step >= options.finalStep) {
      bool moved = false;
      for (auto [dt, dp] : {std::pair{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}}) {
        const double v = m.conditionalEntropy(th + dt, ph + dp);
        if (v < value) {
          value = v;
          th += dt;
          ph += dp;
          moved = true;
          break;
        }
      }
      if (!moved) step /= 2.0;
    }
    if (value < best) {
      best = value;
      bestTheta = th;
      bestPhi = ph;
    }
  }

  DiscordResult out;
  out.mutualInformation = sA + sB - entropyBits(rhoAB);
  out.classicalCorrelation = sB - best;
  out.discord = out.mutualInformation - out.classicalCorrelation;
  out.axis = Eigen::Vector3d(std::sin(bestTheta) * std::cos(bestPhi), std::sin(bestTheta) * std::sin(bestPhi),
                             std::cos(bestTheta));
  return out;
}

std::vector<SweepRow> cpDiscordSweep(const std::vector<std::array<double, 3>>& cGrid,
                                     const std::vector<double>& tGrid, double cpTol) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<SweepRow> rows;
  for (const auto& c : cGrid) {
    const BellDiagonalState state{c};
    const bool valid = state.valid();
    const double discord = valid ? discordClosedForm(state).discord : nan;
    for (double t : tGrid) {
      SweepRow row;
      row.c = c;
      row.t = t;
      row.validState = valid;
      row.discord = discord;
      const CpVerdict cp = isCompletelyPositive(choiFromTransfer(pinMapTransfer(c[2], t)), cpTol);
      row.choiMinEigenvalue = cp.minEigenvalue;
      row.cpVerdict = cp.completelyPositive;
      row.paperKrausResidual =
          gammaSquared(c[2], t, GammaVariant::Printed) >= 0.0 ? isTracePreserving(paperKraus(c[2], t)).residual : nan;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace qcf
