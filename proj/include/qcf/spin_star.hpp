#pragma once

#include "qcf/channel.hpp"

#include <string>
#include <vector>

namespace qcf {

/// One concentric layer of bath spins sharing a coupling to the central spin.
struct Layer {
  int spins = 1;
  double coupling = 1.0;  // inverse time
  bool operator==(const Layer&) const = default;
};

struct LayerConfig {
  std::vector<Layer> layers;

  int totalSpins() const;
  /// Throws DomainError for an empty layer list or a layer with spins < 1.
  void validate() const;
  bool operator==(const LayerConfig&) const = default;
};

/// The shipped demonstration baths {(1,1.0)}, {(2,1.0)}, {(3,0.5),(2,1.0)}, {(4,0.3),(3,0.6),(2,1.0)}.
std::vector<LayerConfig> demoConfigs();

/// Largest bath handled by the explicit 2^N constructions.
inline constexpr int kBruteForceSpinLimit = 12;

/// A group of bath states with joint eigenvalues (lambda1, lambda2) of the
/// two bath operators that drive the lower and upper central-spin blocks.
/// For commuting operators the weight is the integer degeneracy; for the
/// coupled multi-layer operators it is sum |<a_i|b_j>|^2 over the group.
struct BathSector {
  double weight;
  double lambda1;
  double lambda2;
};

struct BathSpectrum {
  int totalSpins = 0;
  std::vector<BathSector> sectors;

  double totalWeight() const;
  /// Bound on the angular frequencies present in f12 and f3.
  double maxFrequency() const;
};

/// Layered operators h1^2 = sum a^2 J+J-, h2^2 = sum a^2 J-J+, built as
/// explicit 2^N matrices and simultaneously diagonalized. N <= kBruteForceSpinLimit.
BathSpectrum bathSpectrumBrute(const LayerConfig& cfg, const Tolerances& tol = defaultTolerances());

/// Same operators from collective angular-momentum sectors (j, m) of each layer.
BathSpectrum bathSpectrumCombinatorial(const LayerConfig& cfg, const Tolerances& tol = defaultTolerances());

/// Exact operators of the central-spin Hamiltonian, A = Xi+ Xi- and B = Xi- Xi+
/// with Xi+- = sum a_mu J+-^mu, inter-layer cross terms included. A and B need
/// not commute; sector weights are overlaps of their eigenvectors.
/// N <= kBruteForceSpinLimit.
BathSpectrum bathSpectrumCoupled(const LayerConfig& cfg, const Tolerances& tol = defaultTolerances());

/// One sector of unit weight (N = 0). Used for the scalar closed forms.
BathSpectrum singleSectorSpectrum(double lambda1, double lambda2);

enum class SpectrumKind { Auto, Combinatorial, Brute, Coupled };

SpectrumKind parseSpectrumKind(const std::string& name);
std::string toString(SpectrumKind kind);

/// Auto: equal couplings collapse to one layer and use the combinatorial route
/// (exact there); distinct couplings use the coupled route.
BathSpectrum bathSpectrum(const LayerConfig& cfg, SpectrumKind kind = SpectrumKind::Auto,
                          const Tolerances& tol = defaultTolerances());

struct FValues {
  double f12;
  double f3;
  double df12;
  double df3;
};

/// f3(t)  = 2^-N sum_s w_s cos(4t sqrt(lambda1))
/// f12(t) = 2^-N sum_s w_s cos(2t sqrt(lambda1)) cos(2t sqrt(lambda2))
/// with analytic time derivatives.
class FFunctions {
 public:
  explicit FFunctions(BathSpectrum spectrum);

  FValues operator()(double t) const;
  const BathSpectrum& spectrum() const { return spectrum_; }

 private:
  BathSpectrum spectrum_;
  std::vector<double> weight_;  // normalized by 2^N
  std::vector<double> root1_;
  std::vector<double> root2_;
};

/// Reduced central-spin state at time t for initial state rho0 and a maximally mixed bath.
Operator reducedState(const FFunctions& f, double t, const Operator& rho0, double tol = 1e-10);

/// diag(1, f12, f12, f3) in the Pauli basis.
TransferMatrix transferMatrix(const FFunctions& f, double t);

/// Images Phi_t(W_a) of the Pauli basis elements.
std::vector<Operator> spinStarImages(const FFunctions& f, double t);

/// L = dF/dt F^-1 = diag(0, f12'/f12, f12'/f12, f3'/f3). Throws PoleEncountered
/// when |f12| or |f3| <= poleTol.
TransferMatrix generatorL(const FFunctions& f, double t, double poleTol = 1e-8);

/// Choi matrix of the channel in the ladder basis {I/sqrt2, s+, s-, sz/sqrt2}.
ChoiMatrix spinStarChoi(const FFunctions& f, double t);
KrausSet spinStarKraus(const FFunctions& f, double t, double truncation = 1e-12);
/// Choi matrix R of the generator L in the matrix-unit basis {|0><0|, |1><1|, |0><1|, |1><0|}.
ChoiMatrix spinStarGeneratorChoi(const FFunctions& f, double t, double poleTol = 1e-8);

}  // namespace qcf
