#include "qcf/spin_star.hpp"

#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace qcf {

int LayerConfig::totalSpins() const {
  int n = 0;
  for (const auto& l : layers) n += l.spins;
  return n;
}

void LayerConfig::validate() const {
  if (layers.empty()) throw DomainError("LayerConfig: at least one layer is required");
  for (const auto& l : layers) {
    if (l.spins < 1) throw DomainError("LayerConfig: every layer needs at least one spin");
    if (!std::isfinite(l.coupling)) throw DomainError("LayerConfig: coupling must be finite");
  }
}

std::vector<LayerConfig> demoConfigs() {
  return {LayerConfig{{{1, 1.0}}}, LayerConfig{{{2, 1.0}}}, LayerConfig{{{3, 0.5}, {2, 1.0}}},
          LayerConfig{{{4, 0.3}, {3, 0.6}, {2, 1.0}}}};
}

double BathSpectrum::totalWeight() const {
  double w = 0.0;
  for (const auto& s : sectors) w += s.weight;
  return w;
}

double BathSpectrum::maxFrequency() const {
  double w = 0.0;
  for (const auto& s : sectors) {
    const double r1 = std::sqrt(s.lambda1);
    const double r2 = std::sqrt(s.lambda2);
    w = std::max({w, 4.0 * r1, 2.0 * (r1 + r2)});
  }
  return w;
}

namespace {

// Sort by (lambda1, lambda2) and merge pairs equal within tol.
std::vector<BathSector> mergeSectors(std::vector<BathSector> in, double tol) {
  std::sort(in.begin(), in.end(), [](const BathSector& a, const BathSector& b) {
    return a.lambda1 != b.lambda1 ? a.lambda1 < b.lambda1 : a.lambda2 < b.lambda2;
  });
  std::vector<BathSector> out;
  std::vector<bool> used(in.size(), false);
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (used[i]) continue;
    BathSector acc = in[i];
    double s1 = in[i].weight * in[i].lambda1;
    double s2 = in[i].weight * in[i].lambda2;
    for (std::size_t j = i + 1; j < in.size() && in[j].lambda1 - in[i].lambda1 <= tol; ++j) {
      if (used[j] || std::abs(in[j].lambda2 - in[i].lambda2) > tol) continue;
      used[j] = true;
      acc.weight += in[j].weight;
      s1 += in[j].weight * in[j].lambda1;
      s2 += in[j].weight * in[j].lambda2;
    }
    if (acc.weight > 0.0) {
      acc.lambda1 = s1 / acc.weight;
      acc.lambda2 = s2 / acc.weight;
    }
    if (acc.weight != 0.0) out.push_back(acc);
  }
  return out;
}

double clampNonNegative(double lambda, double tol, const char* where) {
  if (lambda < -tol) throw Error(std::string(where) + ": negative eigenvalue of a positive operator");
  return std::max(lambda, 0.0);
}

using Sparse = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// Basis index bits: spin j of the bath is bit (N - 1 - j); bit value 0 = up.
// Layer-resolved raising operator J+^mu = sum_{j in mu} s+^(j).
Sparse layerRaising(int totalSpins, int first, int count) {
  const Eigen::Index dim = Eigen::Index{1} << totalSpins;
  std::vector<Triplet> trip;
  for (Eigen::Index b = 0; b < dim; ++b)
    for (int j = first; j < first + count; ++j) {
      const Eigen::Index bit = Eigen::Index{1} << (totalSpins - 1 - j);
      if (b & bit) trip.emplace_back(b & ~bit, b, 1.0);  // |down> -> |up>
    }
  Sparse m(dim, dim);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

struct BathOperators {
  Sparse lower;  // drives the central spin-down block
  Sparse upper;  // drives the central spin-up block
};

BathOperators layeredOperators(const LayerConfig& cfg) {
  const int n = cfg.totalSpins();
  const Eigen::Index dim = Eigen::Index{1} << n;
  BathOperators ops{Sparse(dim, dim), Sparse(dim, dim)};
  int first = 0;
  for (const auto& layer : cfg.layers) {
    const Sparse jp = layerRaising(n, first, layer.spins);
    const Sparse jm = jp.transpose();
    const double a2 = layer.coupling * layer.coupling;
    ops.lower += a2 * Sparse(jp * jm);
    ops.upper += a2 * Sparse(jm * jp);
    first += layer.spins;
  }
  return ops;
}

BathOperators coupledOperators(const LayerConfig& cfg) {
  const int n = cfg.totalSpins();
  const Eigen::Index dim = Eigen::Index{1} << n;
  Sparse xiPlus(dim, dim);
  int first = 0;
  for (const auto& layer : cfg.layers) {
    xiPlus += layer.coupling * layerRaising(n, first, layer.spins);
    first += layer.spins;
  }
  const Sparse xiMinus = xiPlus.transpose();
  return {Sparse(xiPlus * xiMinus), Sparse(xiMinus * xiPlus)};
}

// Sector label of each computational basis state: number of up spins per layer
// (layered) or in total (coupled), packed into one integer.
std::vector<long long> sectorLabels(const LayerConfig& cfg, bool perLayer) {
  const int n = cfg.totalSpins();
  const Eigen::Index dim = Eigen::Index{1} << n;
  std::vector<long long> label(static_cast<std::size_t>(dim));
  for (Eigen::Index b = 0; b < dim; ++b) {
    long long key = 0;
    int first = 0;
    for (const auto& layer : cfg.layers) {
      int ups = 0;
      for (int j = first; j < first + layer.spins; ++j)
        if (!(b & (Eigen::Index{1} << (n - 1 - j)))) ++ups;
      key = perLayer ? key * 64 + ups : key + ups;
      first += layer.spins;
    }
    label[static_cast<std::size_t>(b)] = key;
  }
  return label;
}

void requireBlockDiagonal(const Sparse& m, const std::vector<long long>& label, const char* what) {
  for (int k = 0; k < m.outerSize(); ++k)
    for (Sparse::InnerIterator it(m, k); it; ++it)
      if (it.value() != 0.0 &&
          label[static_cast<std::size_t>(it.row())] != label[static_cast<std::size_t>(it.col())])
        throw Error(std::string(what) + ": operator couples different magnetization sectors");
}

std::map<long long, std::vector<Eigen::Index>> groupByLabel(const std::vector<long long>& label) {
  std::map<long long, std::vector<Eigen::Index>> blocks;
  for (std::size_t i = 0; i < label.size(); ++i) blocks[label[i]].push_back(static_cast<Eigen::Index>(i));
  return blocks;
}

RealMatrix extractBlock(const Sparse& m, const std::vector<Eigen::Index>& idx) {
  const auto n = static_cast<Eigen::Index>(idx.size());
  RealMatrix out = RealMatrix::Zero(n, n);
  std::map<Eigen::Index, Eigen::Index> pos;
  for (Eigen::Index i = 0; i < n; ++i) pos[idx[static_cast<std::size_t>(i)]] = i;
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index col = idx[static_cast<std::size_t>(j)];
    for (Sparse::InnerIterator it(m, col); it; ++it) {
      const auto p = pos.find(it.row());
      if (p != pos.end()) out(p->second, j) = it.value();
    }
  }
  return out;
}

// Consecutive runs (in descending order) of eigenvalues closer than tol.
std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters(const RealVector& values, double tol) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i <= values.size(); ++i)
    if (i == values.size() || values(i - 1) - values(i) > tol) {
      out.emplace_back(start, i - start);
      start = i;
    }
  return out;
}

void requireBruteForceSize(const LayerConfig& cfg, const char* what) {
  cfg.validate();
  if (cfg.totalSpins() > kBruteForceSpinLimit)
    throw ModelLimit(std::string(what) + ": N = " + std::to_string(cfg.totalSpins()) +
                     " exceeds the brute-force limit of " + std::to_string(kBruteForceSpinLimit));
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

}  // namespace

BathSpectrum bathSpectrumBrute(const LayerConfig& cfg, const Tolerances& tol) {
  requireBruteForceSize(cfg, "bathSpectrumBrute");
  const BathOperators ops = layeredOperators(cfg);

  const Sparse comm = Sparse(ops.lower * ops.upper) - Sparse(ops.upper * ops.lower);
  double commNorm = 0.0;
  for (int k = 0; k < comm.outerSize(); ++k)
    for (Sparse::InnerIterator it(comm, k); it; ++it) commNorm += it.value() * it.value();
  if (std::sqrt(commNorm) > tol.structural)
    throw Error("bathSpectrumBrute: h1^2 and h2^2 do not commute (residual " + std::to_string(std::sqrt(commNorm)) + ")");

  const auto label = sectorLabels(cfg, true);
  requireBlockDiagonal(ops.lower, label, "bathSpectrumBrute");
  requireBlockDiagonal(ops.upper, label, "bathSpectrumBrute");

  std::vector<BathSector> sectors;
  for (const auto& [key, idx] : groupByLabel(label)) {
    const RealMatrix a = extractBlock(ops.lower, idx);
    const RealMatrix b = extractBlock(ops.upper, idx);
    const auto ea = hermitianEigen(a);
    for (const auto& [start, len] : clusters(ea.values, tol.sectorMerge)) {
      const RealMatrix v = ea.vectors.middleCols(start, len);
      const RealMatrix projected = v.transpose() * b * v;
      const auto eb = hermitianEigen(projected, 1e-8);
      const double lambda1 = clampNonNegative(ea.values.segment(start, len).mean(), tol.sectorMerge, "bathSpectrumBrute");
      for (Eigen::Index i = 0; i < eb.values.size(); ++i)
        sectors.push_back({1.0, lambda1, clampNonNegative(eb.values(i), tol.sectorMerge, "bathSpectrumBrute")});
    }
  }
  return {cfg.totalSpins(), mergeSectors(std::move(sectors), tol.sectorMerge)};
}

BathSpectrum bathSpectrumCombinatorial(const LayerConfig& cfg, const Tolerances& tol) {
  cfg.validate();
  if (cfg.totalSpins() > 1000) throw ModelLimit("bathSpectrumCombinatorial: N above 1000 overflows the weights");
  std::vector<BathSector> combined{{1.0, 0.0, 0.0}};
  for (const auto& layer : cfg.layers) {
    const int n = layer.spins;
    const double a2 = layer.coupling * layer.coupling;
    std::vector<BathSector> local;
    // twoJ runs over N, N-2, ..., N mod 2; multiplicity C(N, k) - C(N, k-1) with k = N/2 - j.
    for (int twoJ = n; twoJ >= 0; twoJ -= 2) {
      const int k = (n - twoJ) / 2;
      const double mult = binomial(n, k) - binomial(n, k - 1);
      const double j = twoJ / 2.0;
      for (int twoM = -twoJ; twoM <= twoJ; twoM += 2) {
        const double m = twoM / 2.0;
        local.push_back({mult, a2 * (j * (j + 1) - m * (m - 1)), a2 * (j * (j + 1) - m * (m + 1))});
      }
    }
    local = mergeSectors(std::move(local), tol.sectorMerge);
    std::vector<BathSector> next;
    next.reserve(combined.size() * local.size());
    for (const auto& c : combined)
      for (const auto& l : local) next.push_back({c.weight * l.weight, c.lambda1 + l.lambda1, c.lambda2 + l.lambda2});
    combined = mergeSectors(std::move(next), tol.sectorMerge);
  }
  return {cfg.totalSpins(), std::move(combined)};
}

BathSpectrum bathSpectrumCoupled(const LayerConfig& cfg, const Tolerances& tol) {
  requireBruteForceSize(cfg, "bathSpectrumCoupled");
  const BathOperators ops = coupledOperators(cfg);
  const auto label = sectorLabels(cfg, false);
  requireBlockDiagonal(ops.lower, label, "bathSpectrumCoupled");
  requireBlockDiagonal(ops.upper, label, "bathSpectrumCoupled");

  std::vector<BathSector> sectors;
  for (const auto& [key, idx] : groupByLabel(label)) {
    const auto ea = hermitianEigen(extractBlock(ops.lower, idx));
    const auto eb = hermitianEigen(extractBlock(ops.upper, idx));
    const RealMatrix overlap = ea.vectors.transpose() * eb.vectors;
    const auto ca = clusters(ea.values, tol.sectorMerge);
    const auto cb = clusters(eb.values, tol.sectorMerge);
    for (const auto& [sa, la] : ca) {
      const double lambda1 = clampNonNegative(ea.values.segment(sa, la).mean(), tol.sectorMerge, "bathSpectrumCoupled");
      for (const auto& [sb, lb] : cb) {
        const double w = overlap.block(sa, sb, la, lb).squaredNorm();
        if (w == 0.0) continue;
        const double lambda2 = clampNonNegative(eb.values.segment(sb, lb).mean(), tol.sectorMerge, "bathSpectrumCoupled");
        sectors.push_back({w, lambda1, lambda2});
      }
    }
  }
  return {cfg.totalSpins(), mergeSectors(std::move(sectors), tol.sectorMerge)};
}

BathSpectrum singleSectorSpectrum(double lambda1, double lambda2) {
  if (lambda1 < 0.0 || lambda2 < 0.0) throw DomainError("singleSectorSpectrum: eigenvalues must be non-negative");
  return {0, {{1.0, lambda1, lambda2}}};
}

SpectrumKind parseSpectrumKind(const std::string& name) {
  if (name == "auto") return SpectrumKind::Auto;
  if (name == "combinatorial") return SpectrumKind::Combinatorial;
  if (name == "brute") return SpectrumKind::Brute;
  if (name == "coupled") return SpectrumKind::Coupled;
  throw DomainError("unknown spectrum kind '" + name + "' (expected auto, combinatorial, brute or coupled)");
}

std::string toString(SpectrumKind kind) {
  switch (kind) {
    case SpectrumKind::Auto: return "auto";
    case SpectrumKind::Combinatorial: return "combinatorial";
    case SpectrumKind::Brute: return "brute";
    case SpectrumKind::Coupled: return "coupled";
  }
  return "auto";
}

BathSpectrum bathSpectrum(const LayerConfig& cfg, SpectrumKind kind, const Tolerances& tol) {
  switch (kind) {
    case SpectrumKind::Combinatorial: return bathSpectrumCombinatorial(cfg, tol);
    case SpectrumKind::Brute: return bathSpectrumBrute(cfg, tol);
    case SpectrumKind::Coupled: return bathSpectrumCoupled(cfg, tol);
    case SpectrumKind::Auto: break;
  }
  cfg.validate();
  const double a = std::abs(cfg.layers.front().coupling);
  const bool uniform = std::all_of(cfg.layers.begin(), cfg.layers.end(),
                                   [a](const Layer& l) { return std::abs(l.coupling) == a; });
  if (uniform) return bathSpectrumCombinatorial(LayerConfig{{{cfg.totalSpins(), a}}}, tol);
  return bathSpectrumCoupled(cfg, tol);
}

FFunctions::FFunctions(BathSpectrum spectrum) : spectrum_(std::move(spectrum)) {
  const double norm = std::ldexp(1.0, -spectrum_.totalSpins);
  for (const auto& s : spectrum_.sectors) {
    if (s.lambda1 < 0.0 || s.lambda2 < 0.0) throw DomainError("FFunctions: negative bath eigenvalue");
    weight_.push_back(s.weight * norm);
    root1_.push_back(std::sqrt(s.lambda1));
    root2_.push_back(std::sqrt(s.lambda2));
  }
}

FValues FFunctions::operator()(double t) const {
  FValues v{0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < weight_.size(); ++i) {
    const double w = weight_[i];
    const double r1 = root1_[i];
    const double r2 = root2_[i];
    const double c1 = std::cos(2.0 * t * r1), s1 = std::sin(2.0 * t * r1);
    const double c2 = std::cos(2.0 * t * r2), s2 = std::sin(2.0 * t * r2);
    v.f3 += w * std::cos(4.0 * t * r1);
    v.df3 -= w * 4.0 * r1 * std::sin(4.0 * t * r1);
    v.f12 += w * c1 * c2;
    v.df12 -= w * 2.0 * (r1 * s1 * c2 + r2 * c1 * s2);
  }
  return v;
}

Operator reducedState(const FFunctions& f, double t, const Operator& rho0, double tol) {
  if (rho0.rows() != 2 || rho0.cols() != 2) throw InvalidState("reducedState: initial state must be a qubit");
  requireDensityMatrix(rho0, tol, "reducedState");
  const FValues v = f(t);
  const double v3 = (rho0(0, 0) - rho0(1, 1)).real();
  Operator out(2, 2);
  out(0, 0) = 0.5 * (1.0 + v3 * v.f3);
  out(1, 1) = 0.5 * (1.0 - v3 * v.f3);
  out(0, 1) = rho0(0, 1) * v.f12;
  out(1, 0) = rho0(1, 0) * v.f12;
  return out;
}

TransferMatrix transferMatrix(const FFunctions& f, double t) {
  const FValues v = f(t);
  RealMatrix m = RealMatrix::Zero(4, 4);
  m.diagonal() << 1.0, v.f12, v.f12, v.f3;
  return {m, pauliBasis(), 0.0};
}

std::vector<Operator> spinStarImages(const FFunctions& f, double t) {
  const FValues v = f(t);
  const double k = 1.0 / std::sqrt(2.0);
  return {k * pauli::identity(), k * v.f12 * pauli::x(), k * v.f12 * pauli::y(), k * v.f3 * pauli::z()};
}

TransferMatrix generatorL(const FFunctions& f, double t, double poleTol) {
  const FValues v = f(t);
  if (std::abs(v.f12) <= poleTol) throw PoleEncountered("f12", t, v.f12);
  if (std::abs(v.f3) <= poleTol) throw PoleEncountered("f3", t, v.f3);
  RealMatrix m = RealMatrix::Zero(4, 4);
  m.diagonal() << 0.0, v.df12 / v.f12, v.df12 / v.f12, v.df3 / v.f3;
  return {m, pauliBasis(), 0.0};
}

ChoiMatrix spinStarChoi(const FFunctions& f, double t) {
  return qubitRepresentation().choiFromTransfer(transferMatrix(f, t));
}

KrausSet spinStarKraus(const FFunctions& f, double t, double truncation) {
  return krausFromChoi(spinStarChoi(f, t), truncation);
}

ChoiMatrix spinStarGeneratorChoi(const FFunctions& f, double t, double poleTol) {
  return qubitMatrixUnitRepresentation().choiFromTransfer(generatorL(f, t, poleTol));
}

}  // namespace qcf
