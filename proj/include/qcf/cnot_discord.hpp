#pragma once

#include "qcf/channel.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qcf {

/// H = sx (x) (I - sz)/2 + I (x) (I + sz)/2; the first factor is the system qubit.
Operator cnotHamiltonian();
/// Closed form of exp(-i H t).
Operator cnotUnitary(double t);
/// exp(-i H t) through the Hermitian eigensystem of H.
Operator cnotUnitaryExp(double t);

/// Two-qubit state (I (x) I + sum c_i s_i (x) s_i) / 4.
struct BellDiagonalState {
  std::array<double, 3> c{};

  /// Eigenvalues (1-c1-c2-c3, 1-c1+c2+c3, 1+c1-c2+c3, 1+c1+c2-c3) / 4.
  std::array<double, 4> eigenvalues() const;
  bool valid(double tol = 1e-12) const;
  /// Throws InvalidState when some eigenvalue is below -tol.
  void require(double tol = 1e-12) const;
};

Operator jointState(const BellDiagonalState& s);

/// Reduced system state after U(t) acting on the Bell-diagonal state; depends on c3 only:
/// (1/4) [[2 + c3(1 - cos 2t), -i c3 sin 2t], [i c3 sin 2t, 2 - c3(1 - cos 2t)]].
Operator reducedEvolved(double c3, double t);

/// Pin map rho -> tr(rho) rho_s(t) in the Pauli basis: first column sqrt2 * r(rho_s(t)).
TransferMatrix pinMapTransfer(double c3, double t);

enum class GammaVariant { Printed, SinSquared, SinDouble };

std::string toString(GammaVariant v);
/// 1 - c3 sin t, 1 - c3 sin^2 t, 1 - c3 sin 2t.
double gammaSquared(double c3, double t, GammaVariant v);

/// The four operators of the printed Kraus set, with Gamma = sqrt(gammaSquared).
/// Returned verbatim, without any completeness assumption. Throws DomainError
/// when gammaSquared < 0.
std::vector<Operator> paperKraus(double c3, double t, GammaVariant v = GammaVariant::Printed);

struct DiscordResult {
  double mutualInformation = 0.0;     // bits
  double classicalCorrelation = 0.0;  // bits
  double discord = 0.0;               // bits
  std::optional<Eigen::Vector3d> axis;  // optimal measurement direction (numerical path only)
};

/// Von Neumann entropy in bits; 0 log 0 = 0.
double entropyBits(const Operator& rho);

DiscordResult discordClosedForm(const BellDiagonalState& s);

struct DiscordOptions {
  int polarPoints = 64;
  int azimuthPoints = 128;
  int starts = 8;          // best grid cell plus starts - 1 random points
  double finalStep = 1e-8;
  std::uint64_t seed = 42;
};

/// Discord with projective measurements on the first qubit, optimized over the
/// Bloch sphere: polar grid, then coordinate descent from several starts.
DiscordResult discordNumerical(const Operator& rhoAB, const DiscordOptions& options = {});

struct SweepRow {
  std::array<double, 3> c{};
  double t = 0.0;
  double discord = 0.0;           // closed form; NaN for invalid states
  double choiMinEigenvalue = 0.0;
  bool cpVerdict = false;
  double paperKrausResidual = 0.0;  // printed Gamma; NaN outside its domain
  bool validState = false;
};

std::vector<SweepRow> cpDiscordSweep(const std::vector<std::array<double, 3>>& cGrid,
                                     const std::vector<double>& tGrid, double cpTol = 1e-10);

}  // namespace qcf
