#include "qcf/verify.hpp"

#include "qcf/cnot_discord.hpp"
#include "qcf/kernels.hpp"
#include "qcf/oracles.hpp"
#include "qcf/report.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace qcf {

namespace {

using Clock = std::chrono::steady_clock;

double seconds(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

double maxAbs(const Operator& a) { return a.cwiseAbs().maxCoeff(); }
double maxAbs(const RealMatrix& a) { return a.cwiseAbs().maxCoeff(); }

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i == n - 1 ? b : a + (b - a) * i / (n - 1);
  return v;
}

std::string cfgName(const LayerConfig& cfg) {
  std::string s = "{";
  for (std::size_t i = 0; i < cfg.layers.size(); ++i) {
    if (i) s += ",";
    s += "(" + std::to_string(cfg.layers[i].spins) + "," + formatNumber(cfg.layers[i].coupling) + ")";
  }
  return s + "}";
}

LayerConfig layers(std::initializer_list<Layer> l) { return LayerConfig{std::vector<Layer>(l)}; }

class Suite {
 public:
  Suite(int criterion, const VerifyOptions& o) : criterion_(criterion), options_(o) {}

  void check(std::string name, double residual, double threshold, long comparisons, bool oracle,
             std::string detail = {}) {
    CheckResult r;
    r.criterion = criterion_;
    r.name = std::move(name);
    r.threshold = options_.threshold.value_or(threshold);
    r.residual = residual;
    r.pass = std::isfinite(residual) && residual <= r.threshold;
    r.comparisons = comparisons;
    r.oracle = oracle;
    r.detail = std::move(detail);
    results_.push_back(std::move(r));
  }

  // Wall-clock budgets are not tolerances and ignore the override.
  void runtime(std::string name, double secs, double limit) {
    CheckResult r;
    r.criterion = criterion_;
    r.name = std::move(name);
    r.residual = secs;
    r.threshold = limit;
    r.pass = secs < limit;
    r.detail = "seconds";
    results_.push_back(std::move(r));
  }

  void info(std::string name, double value, std::string detail) {
    CheckResult r;
    r.criterion = criterion_;
    r.name = std::move(name);
    r.pass = true;
    r.informational = true;
    r.residual = value;
    r.threshold = std::numeric_limits<double>::quiet_NaN();
    r.detail = std::move(detail);
    results_.push_back(std::move(r));
  }

  void fail(std::string name, const std::exception& e) {
    CheckResult r;
    r.criterion = criterion_;
    r.name = std::move(name);
    r.pass = false;
    r.residual = std::numeric_limits<double>::quiet_NaN();
    r.detail = std::string("exception: ") + e.what();
    results_.push_back(std::move(r));
  }

  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  int criterion_;
  const VerifyOptions& options_;
  std::vector<CheckResult> results_;
};

std::vector<Operator> randomStates(std::mt19937_64& rng, int count) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Operator> out;
  for (int i = 0; i < count; ++i) {
    Eigen::Vector3d d(gauss(rng), gauss(rng), gauss(rng));
    d *= std::cbrt(unit(rng)) / d.norm();
    out.push_back(qubitState(d.x(), d.y(), d.z()));
  }
  return out;
}

Operator randomMatrix(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> gauss;
  Operator m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = complex(gauss(rng), gauss(rng));
  return m;
}

// Random qubit channel with `count` Kraus operators: A_i G^{-1/2}, G = sum A^dagger A.
std::vector<Operator> randomKrausChannel(std::mt19937_64& rng, int count) {
  std::vector<Operator> a;
  Operator g = Operator::Zero(2, 2);
  for (int i = 0; i < count; ++i) {
    a.push_back(randomMatrix(rng, 2));
    g += a.back().adjoint() * a.back();
  }
  const Operator inv = matrixFunction(g, [](double x) { return 1.0 / std::sqrt(x); });
  for (auto& m : a) m = m * inv;
  return a;
}

// ---------------------------------------------------------------------------

void moduleInvariants(Suite& s, const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed);
  {
    double res = 0.0;
    res = std::max(res, maxAbs(Operator(gramMatrix(pauliBasis().operators()) - Operator::Identity(4, 4))));
    res = std::max(res, maxAbs(Operator(gramMatrix(ladderBasis().operators()) - Operator::Identity(4, 4))));
    res = std::max(res, maxAbs(Operator(gramMatrix(gellMannBasis(3).operators()) - Operator::Identity(9, 9))));
    s.check("basis orthonormality (Pauli, ladder, Gell-Mann d=3)", res, 1e-12, 3, false);
  }
  {
    double rec = 0.0, eig = 0.0;
    std::uniform_int_distribution<int> dim(2, 16);
    for (int k = 0; k < 100; ++k) {
      const Operator m = randomMatrix(rng, dim(rng));
      const Operator h = (m + m.adjoint()) / 2.0;
      const auto sys = hermitianEigen(h);
      const Operator back = sys.vectors * sys.values.cast<complex>().asDiagonal() * sys.vectors.adjoint();
      rec = std::max(rec, (h - back).norm() / h.norm());
      Eigen::SelfAdjointEigenSolver<Operator> ref(h, Eigen::EigenvaluesOnly);
      const RealVector sorted = ref.eigenvalues().reverse();
      eig = std::max(eig, (sorted - sys.values).cwiseAbs().maxCoeff() / std::max(1.0, h.norm()));
    }
    s.check("Jacobi reconstruction ||A - V L V^dag||_F / ||A||_F, 100 Hermitian matrices", rec, 1e-10, 100, false);
    s.check("Jacobi eigenvalues vs Eigen self-adjoint solver", eig, 1e-10, 100, true);
  }
  {
    long disagreements = 0;
    double eigDiff = 0.0, roundTrip = 0.0;
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    for (int k = 0; k < 50; ++k) {
      TransferMatrix f{RealMatrix::Identity(4, 4), pauliBasis(), 0.0};
      std::vector<Operator> kraus;
      if (k % 2 == 0) {
        kraus = randomKrausChannel(rng, 1 + k % 4);
        f = transferFromMap(krausImages(kraus, pauliBasis()), pauliBasis());
      } else {
        for (int i = 1; i < 4; ++i)
          for (int j = 0; j < 4; ++j) f.matrix(i, j) = entry(rng);
      }
      const ChoiMatrix choi = choiFromTransfer(f);
      const CpVerdict v = isCompletelyPositive(choi);
      const double ref = oracle::standardChoiMinEigenvalue(f);
      if (v.completelyPositive != (ref >= -1e-10)) ++disagreements;
      eigDiff = std::max(eigDiff, std::abs(v.minEigenvalue - ref));
      if (v.completelyPositive) {
        const KrausSet ks = krausFromChoi(choi);
        const TransferMatrix back = transferFromMap(krausImages(ks.operators, pauliBasis()), pauliBasis());
        roundTrip = std::max(roundTrip, maxAbs(RealMatrix(back.matrix - f.matrix)));
      }
    }
    s.check("CP verdict vs standard Choi matrix, 50 random maps (disagreements)", static_cast<double>(disagreements),
            0.0, 50, true);
    s.check("Choi min eigenvalue vs standard Choi min eigenvalue", eigDiff, 1e-10, 50, true);
    s.check("round trip F -> S -> Kraus -> F", roundTrip, 1e-10, 25, false);
  }
}

// 1. Spin-star channel structure.
void criterion1(Suite& s, const VerifyOptions&) {
  const auto start = Clock::now();
  const std::vector<LayerConfig> cfgs{layers({{1, 1.0}}), layers({{2, 1.0}}), layers({{3, 0.5}, {2, 1.0}})};
  const auto grid = linspace(0.0, 3.0, 200);
  double resF = 0.0, resS = 0.0;
  long n = 0;
  for (const auto& cfg : cfgs) {
    const FFunctions f(bathSpectrum(cfg));
    for (double t : grid) {
      const FValues v = f(t);
      const TransferMatrix fm = transferFromMap(spinStarImages(f, t), pauliBasis());
      RealMatrix expectF = RealMatrix::Zero(4, 4);
      expectF.diagonal() << 1.0, v.f12, v.f12, v.f3;
      resF = std::max(resF, maxAbs(RealMatrix(fm.matrix - expectF)));
      const ChoiMatrix sm = choiFromTransfer(fm);
      Operator expectS = Operator::Zero(4, 4);
      expectS.diagonal() << 0.5 * (1 + 2 * v.f12 + v.f3), 0.5 * (1 - v.f3), 0.5 * (1 - v.f3),
          0.5 * (1 - 2 * v.f12 + v.f3);
      resS = std::max(resS, maxAbs(Operator(sm.matrix - expectS)));
      ++n;
    }
  }
  s.check("F(t) = diag(1, f12, f12, f3) from map images", resF, 1e-10, n, false, "3 configs x 200 t in [0, 3]");
  s.check("S(t) = diag(1+2f12+f3, 1-f3, 1-f3, 1-2f12+f3)/2", resS, 1e-10, n, false);
  s.runtime("criterion 1 runtime", seconds(start), 5.0);
}

// 2. Kraus correctness.
void criterion2(Suite& s, const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed + 2);
  const auto states = randomStates(rng, 10);
  const std::vector<LayerConfig> cfgs{layers({{1, 1.0}}), layers({{2, 1.0}}), layers({{3, 0.5}, {2, 1.0}})};
  const auto grid = linspace(0.0, 3.0, 200);
  double tp = 0.0, dyn = 0.0;
  long n = 0, m = 0;
  for (const auto& cfg : cfgs) {
    const FFunctions f(bathSpectrum(cfg));
    for (double t : grid) {
      const KrausSet k = spinStarKraus(f, t);
      tp = std::max(tp, isTracePreserving(k).residual);
      ++n;
      for (const auto& rho : states) {
        dyn = std::max(dyn, maxAbs(Operator(applyKraus(k, rho) - reducedState(f, t, rho))));
        ++m;
      }
    }
  }
  s.check("Kraus TP residual ||sum M^dag M - I||_F", tp, 1e-10, n, false);
  s.check("Kraus dynamics vs reduced-state formula, 10 random states", dyn, 1e-10, m, false);
}

// 3. Oracle equivalence.
void criterion3(Suite& s, const VerifyOptions& o) {
  const auto start = Clock::now();
  const auto grid = linspace(0.0, 3.0, 200);
  {
    const std::vector<LayerConfig> cfgs{layers({{1, 1.0}}),           layers({{2, 1.0}}),
                                        layers({{3, 0.5}, {2, 1.0}}), layers({{4, 0.3}, {3, 0.6}, {2, 1.0}}),
                                        layers({{10, 1.0}}),          layers({{2, 0.7}, {3, 0.4}, {1, 1.3}})};
    double res = 0.0, weight = 0.0;
    long n = 0;
    for (const auto& cfg : cfgs) {
      const BathSpectrum comb = bathSpectrumCombinatorial(cfg);
      const BathSpectrum brute = bathSpectrumBrute(cfg);
      weight = std::max(weight, std::abs(comb.totalWeight() - std::ldexp(1.0, cfg.totalSpins())));
      weight = std::max(weight, std::abs(brute.totalWeight() - std::ldexp(1.0, cfg.totalSpins())));
      const FFunctions fc(comb), fb(brute);
      for (double t : grid) {
        const FValues a = fc(t), b = fb(t);
        res = std::max({res, std::abs(a.f12 - b.f12), std::abs(a.f3 - b.f3)});
        ++n;
      }
    }
    s.check("combinatorial vs brute-force Kronecker spectrum (f12, f3), N <= 10", res, 1e-12, n, true,
            "6 configs x 200 t");
    s.check("sector weights sum to 2^N", weight, 1e-9, 12, false);
  }
  {
    // Dense cosine-matrix traces (Eigen solver) against the sector sums.
    const std::vector<LayerConfig> cfgs{layers({{1, 1.0}}), layers({{2, 1.0}}), layers({{3, 0.5}, {2, 1.0}}),
                                        layers({{2, 0.7}, {3, 0.4}, {1, 1.3}})};
    double layered = 0.0, coupled = 0.0;
    long n = 0;
    for (const auto& cfg : cfgs) {
      const FFunctions fl(bathSpectrumCombinatorial(cfg)), fc(bathSpectrumCoupled(cfg));
      for (double t : linspace(0.0, 3.0, 13)) {
        const auto ol = oracle::cosineTraces(cfg, t, oracle::BathOperators::Layered);
        const auto oc = oracle::cosineTraces(cfg, t, oracle::BathOperators::Coupled);
        layered = std::max({layered, std::abs(ol.f12 - fl(t).f12), std::abs(ol.f3 - fl(t).f3)});
        coupled = std::max({coupled, std::abs(oc.f12 - fc(t).f12), std::abs(oc.f3 - fc(t).f3)});
        ++n;
      }
    }
    s.check("layered spectrum vs dense cosine-matrix traces", layered, 1e-10, n, true);
    s.check("coupled spectrum vs dense cosine-matrix traces", coupled, 1e-10, n, true);
  }
  {
    std::mt19937_64 rng(o.seed + 3);
    auto states = randomStates(rng, 3);
    states.push_back(qubitState(0, 0, 1));
    const std::vector<LayerConfig> cfgs{layers({{1, 1.0}}), layers({{2, 1.0}}), layers({{3, 0.5}, {2, 1.0}}),
                                        layers({{4, 1.0}}), layers({{2, 0.7}, {3, 0.4}, {1, 1.3}})};
    double res = 0.0, twoPath = 0.0;
    long n = 0, m = 0;
    for (const auto& cfg : cfgs) {
      const FFunctions f(bathSpectrum(cfg));
      const oracle::JointEvolution joint(cfg);
      for (double t : linspace(0.0, 3.0, 40)) {
        const auto exact = joint.reducedStates(t, states);
        for (std::size_t i = 0; i < states.size(); ++i) {
          res = std::max(res, maxAbs(Operator(exact[i] - reducedState(f, t, states[i]))));
          ++n;
        }
        const TransferMatrix viaJoint = transferFromMap(joint.images(t), pauliBasis());
        twoPath = std::max(twoPath, maxAbs(RealMatrix(viaJoint.matrix - transferMatrix(f, t).matrix)));
        ++m;
      }
    }
    s.check("reduced dynamics vs joint unitary + partial trace, N <= 6", res, 1e-10, n, true,
            "5 configs x 40 t x 4 states");
    s.check("two-path F: transferMatrix vs joint-evolution images", twoPath, 1e-10, m, true);

    // The layered operators of the closed-form spectrum omit inter-layer cross
    // terms; shown for scale only.
    const LayerConfig mixed = layers({{3, 0.5}, {2, 1.0}});
    const FFunctions layered(bathSpectrumCombinatorial(mixed));
    const oracle::JointEvolution joint(mixed);
    double dev = 0.0;
    for (double t : linspace(0.0, 3.0, 40))
      dev = std::max(dev, maxAbs(Operator(joint.reducedState(t, states.back()) - reducedState(layered, t, states.back()))));
    s.info("layered (no cross-term) model vs joint evolution, " + cfgName(mixed), dev,
           "deviation of the cross-term-free bath operators");
  }
  s.runtime("criterion 3 runtime", seconds(start), 60.0);
}

// 4. TCL consistency.
void criterion4(Suite& s, const VerifyOptions& o) {
  {
    std::mt19937_64 rng(o.seed + 4);
    auto states = randomStates(rng, 1);
    states.push_back(qubitState(0, 0, 1));
    const std::vector<LayerConfig> cfgs{layers({{1, 1.0}}), layers({{2, 1.0}}), layers({{3, 0.5}, {2, 1.0}}),
                                        layers({{4, 0.3}, {3, 0.6}, {2, 1.0}}), layers({{2, 1.0}, {1, 0.5}})};
    double res = 0.0;
    long n = 0;
    std::string detail;
    for (const auto& cfg : cfgs) {
      const FFunctions f(bathSpectrum(cfg));
      const auto poles = findPoles(f, 3.0);
      const double end = poles.empty() ? 3.0 : poles.front().t - 0.1;
      detail += cfgName(cfg) + ": t <= " + formatNumber(end) + "; ";
      if (end <= 0.0) continue;
      const auto grid = linspace(0.0, end, 60);
      for (const auto& rho : states) {
        const TclTrajectory traj = propagateTCL(f, rho, grid);
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
          res = std::max(res, maxAbs(Operator(traj.states[i] - reducedState(f, traj.times[i], rho))));
          ++n;
        }
      }
    }
    s.check("TCL integration vs F(t) r(0) up to 0.1 before the first pole", res, 1e-6, n, true, detail);
  }
  {
    const std::pair<double, double> sectors[] = {{1.0, 0.0}, {1.0, 0.25}, {2.0, 0.5}, {0.3, 1.7}};
    double res = 0.0;
    long n = 0;
    for (auto [l1, l2] : sectors) {
      const FFunctions f(singleSectorSpectrum(l1, l2));
      for (double t : linspace(0.0, 3.0, 301)) {
        const FValues v = f(t);
        if (std::abs(v.f12) < 0.05 || std::abs(v.f3) < 0.05) continue;
        const RealMatrix l = tclGenerator(f, t).matrix;
        const TclRatesClosedForm g = tclClosedForm(std::sqrt(l1), std::sqrt(l2), t);
        res = std::max({res, std::abs(l(1, 1) - g.gamma1), std::abs(l(2, 2) - g.gamma1), std::abs(l(3, 3) - g.gamma2)});
        ++n;
      }
    }
    s.check("single-sector gamma1, gamma2 closed forms vs dF/dt F^-1", res, 1e-8, n, false,
            "4 sectors, t with |f12|, |f3| >= 0.05");
  }
  {
    double res = 0.0;
    long n = 0;
    for (const auto& cfg : demoConfigs()) {
      const FFunctions f(bathSpectrum(cfg));
      for (double t : linspace(0.0, 3.0, 61)) {
        const FValues v = f(t);
        if (std::abs(v.f12) <= 1e-6 || std::abs(v.f3) <= 1e-6) continue;
        RealMatrix fdot = RealMatrix::Zero(4, 4);
        fdot.diagonal() << 0.0, v.df12, v.df12, v.df3;
        res = std::max(res, maxAbs(RealMatrix(tclGenerator(f, t).matrix * transferMatrix(f, t).matrix - fdot)));
        ++n;
      }
    }
    s.check("definitional identity P_TCL F = dF/dt", res, 1e-10, n, false);
  }
}

// 5. NZ consistency.
void criterion5(Suite& s, const VerifyOptions&) {
  const auto us = linspace(0.5, 5.0, 10);
  double quad = 0.0, ident = 0.0, talbot = 0.0;
  long nq = 0, ni = 0, nt = 0;
  for (const auto& cfg : demoConfigs()) {
    const BathSpectrum spec = bathSpectrum(cfg);
    const FFunctions f(spec);
    for (double u : us) {
      const LaplaceTransfer lt = laplaceTransfer(spec, u);
      const RealVector q = oracle::laplaceQuadrature(
          [&](double t) {
            const FValues v = f(t);
            return RealVector((RealVector(2) << v.f12, v.f3).finished());
          },
          u, std::min(0.5, 3.0 / std::max(1.0, spec.maxFrequency())));
      quad = std::max({quad, std::abs(q(1) - lt.matrix(3, 3)), std::abs(q(0) - lt.matrix(1, 1))});
      nq += 2;
      const NzKernelLaplace nz = nzKernelLaplace(spec, u);
      const RealMatrix prod = (u * RealMatrix::Identity(4, 4) - nz.matrix) * lt.matrix;
      ident = std::max(ident, maxAbs(RealMatrix(prod - RealMatrix::Identity(4, 4))));
      ++ni;
    }
    TalbotOptions opt;
    opt.oscillationBound = spec.maxFrequency();
    for (double t : linspace(0.1, 5.0, 50)) {
      const FValues v = f(t);
      const double r3 = inverseLaplaceTalbot([&](complex u) { return laplaceF3(spec, u); }, t, opt).value;
      const double r12 = inverseLaplaceTalbot([&](complex u) { return laplaceF12(spec, u); }, t, opt).value;
      talbot = std::max({talbot, std::abs(r3 - v.f3), std::abs(r12 - v.f12)});
      nt += 2;
    }
  }
  s.check("closed-form Laplace transform vs Gauss-Legendre quadrature, u in [0.5, 5]", quad, 1e-8, nq, true);
  s.check("(uI - P_NZ(u)) F(u) = I", ident, 1e-12, ni, false);
  s.check("Talbot inversion recovers f3, f12 on t in [0.1, 5]", talbot, 1e-6, nt, true);
}

// 6. Operator-form rates.
void criterion6(Suite& s, const VerifyOptions& o) {
  {
    std::mt19937_64 rng(o.seed + 6);
    std::uniform_real_distribution<double> entry(-5.0, 5.0);
    double res = 0.0;
    for (int k = 0; k < 100; ++k) {
      const double a = entry(rng), b = entry(rng);
      RealMatrix p = RealMatrix::Zero(4, 4);
      p.diagonal() << 0.0, a, a, b;
      res = std::max(res, maxAbs(RealMatrix(generatorFromRates(operatorForm(p)) - p)));
    }
    s.check("rates (g+ = g- = -b/2, gz = (b-2a)/4) rebuild diag(0,a,a,b)", res, 1e-12, 100, false);
  }
  {
    std::mt19937_64 rng(o.seed + 61);
    const auto states = randomStates(rng, 4);
    const HermitianBasis w = pauliBasis();
    double res = 0.0;
    long n = 0;
    for (const auto& cfg : demoConfigs()) {
      const FFunctions f(bathSpectrum(cfg));
      for (double t : linspace(0.05, 3.0, 60)) {
        const FValues v = f(t);
        if (std::abs(v.f12) < 1e-2 || std::abs(v.f3) < 1e-2) continue;
        const OperatorFormRates rates = operatorForm(generatorL(f, t).matrix);
        const ChoiMatrix r = spinStarGeneratorChoi(f, t);
        for (const auto& rho : states) {
          res = std::max(res, maxAbs(Operator(applyOperatorForm(rates, rho) - applyGenerator(r, rho))));
          ++n;
        }
        for (const auto& op : w.operators()) {
          res = std::max(res, maxAbs(Operator(applyOperatorForm(rates, op) - applyGenerator(r, op))));
          ++n;
        }
      }
    }
    s.check("dissipator form vs applyGenerator on the spin-star R", res, 1e-10, n, false);
  }
}

// 7. CNOT case study.
void criterion7(Suite& s, const VerifyOptions& o) {
  {
    double res = 0.0;
    const auto ts = linspace(0.0, 2.0 * std::numbers::pi, 100);
    for (double t : ts) res = std::max(res, (cnotUnitary(t) - cnotUnitaryExp(t)).norm());
    s.check("closed-form U(t) vs exp(-iHt), t in [0, 2pi]", res, 1e-12, 100, true);
  }
  std::mt19937_64 rng(o.seed + 7);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<std::array<double, 3>> cs;
  while (cs.size() < 30) {
    const std::array<double, 3> c{coef(rng), coef(rng), coef(rng)};
    if (BellDiagonalState{c}.valid()) cs.push_back(c);
  }
  double res = 0.0, indep = 0.0;
  long n = 0, m = 0;
  for (const auto& c : cs)
    for (double t : linspace(0.0, 2.0 * std::numbers::pi, 25)) {
      const Operator u = cnotUnitary(t);
      const Operator traced = partialTrace(Operator(u * jointState({c}) * u.adjoint()), 2, 2, Keep::First);
      res = std::max(res, maxAbs(Operator(traced - reducedEvolved(c[2], t))));
      ++n;
      // Vary c1, c2 at fixed c3 within the valid region.
      for (double scale : {0.0, 0.5}) {
        const std::array<double, 3> c2{c[0] * scale, c[1] * scale, c[2]};
        if (!BellDiagonalState{c2}.valid()) continue;
        const Operator other = partialTrace(Operator(u * jointState({c2}) * u.adjoint()), 2, 2, Keep::First);
        indep = std::max(indep, maxAbs(Operator(other - traced)));
        ++m;
      }
    }
  s.check("reduced state formula vs partial trace of U rho U^dag", res, 1e-12, n, true, "30 random valid c x 25 t");
  s.check("independence of the reduced state from c1, c2", indep, 1e-12, m, true);
}

// 8. CP versus discord.
void criterion8(Suite& s, const VerifyOptions& o) {
  const double levels[] = {-0.8, -0.4, 0.0, 0.4, 0.8};
  std::vector<std::array<double, 3>> cs;
  for (double a : levels)
    for (double b : levels)
      for (double c : levels) {
        const BellDiagonalState st{{a, b, c}};
        if (st.valid() && discordClosedForm(st).discord > 0.05) cs.push_back(st.c);
      }
  DiscordOptions dopt;
  dopt.seed = o.seed;
  double optim = 0.0, cp = 0.0, choiOracle = 0.0, minDiscord = std::numeric_limits<double>::infinity();
  long n = 0, m = 0;
  const auto ts = linspace(0.0, 3.0, 31);
  for (const auto& c : cs) {
    const BellDiagonalState st{c};
    const DiscordResult closed = discordClosedForm(st);
    minDiscord = std::min(minDiscord, closed.discord);
    const DiscordResult num = discordNumerical(jointState(st), dopt);
    optim = std::max(optim, std::abs(num.discord - closed.discord));
    ++n;
    for (double t : ts) {
      const TransferMatrix f = pinMapTransfer(c[2], t);
      const CpVerdict v = isCompletelyPositive(choiFromTransfer(f));
      cp = std::max(cp, -v.minEigenvalue);
      choiOracle = std::max(choiOracle, -oracle::standardChoiMinEigenvalue(f));
      ++m;
    }
  }
  s.check("states with discord > 0.05 bits found", cs.empty() ? 1.0 : 0.0, 0.0, static_cast<long>(cs.size()), false,
          std::to_string(cs.size()) + " states, smallest discord " + formatNumber(minDiscord) + " bits");
  s.check("closed-form discord vs numerical optimizer", optim, 1e-6, n, true);
  s.check("pin-map Choi min eigenvalue >= -tol at every t (reported as max(-lambda_min))", std::max(cp, 0.0), 1e-10, m,
          false);
  s.check("pin-map standard Choi min eigenvalue >= -tol", std::max(choiOracle, 0.0), 1e-10, m, true);
}

// 9. Printed Kraus set audit.
void criterion9(Suite& s, const VerifyOptions&) {
  const GammaVariant variants[] = {GammaVariant::Printed, GammaVariant::SinSquared, GammaVariant::SinDouble};
  double diff = 0.0, closed = 0.0, maxRes = 0.0, minRes = std::numeric_limits<double>::infinity();
  long n = 0;
  for (GammaVariant v : variants)
    for (double c3 : linspace(-1.0, 1.0, 21))
      for (double t : linspace(0.0, 2.0 * std::numbers::pi, 41)) {
        if (gammaSquared(c3, t, v) < 0.0) continue;
        const double res = isTracePreserving(paperKraus(c3, t, v)).residual;
        diff = std::max(diff, std::abs(res - oracle::paperKrausResidualSymbolic(c3, t, v)));
        closed = std::max(closed, std::abs(res - oracle::paperKrausResidualClosedForm(c3, t, v)));
        if (v == GammaVariant::Printed) {
          maxRes = std::max(maxRes, res);
          minRes = std::min(minRes, res);
        }
        ++n;
      }
  s.check("printed Kraus completeness residual vs Pauli-algebra expansion", diff, 1e-12, n, true,
          "3 Gamma variants x 21 c3 x 41 t");
  s.check("residual vs sqrt2 |1/4 + Gamma^2/2 - 1|", closed, 1e-12, n, true);
  s.info("printed Kraus set ||sum M^dag M - I||_F range (printed Gamma)", maxRes,
         "min " + formatNumber(minRes) + ", max " + formatNumber(maxRes) + "; the set is not trace preserving");
}

}  // namespace

std::vector<CheckResult> runCriterion(int criterion, const VerifyOptions& options) {
  Suite s(criterion, options);
  using Fn = void (*)(Suite&, const VerifyOptions&);
  static const Fn table[] = {moduleInvariants, criterion1, criterion2, criterion3, criterion4,
                             criterion5,       criterion6, criterion7, criterion8, criterion9};
  if (criterion < 0 || criterion > 9) throw DomainError("runCriterion: criterion must be in 0..9");
  try {
    table[criterion](s, options);
  } catch (const std::exception& e) {
    s.fail("criterion " + std::to_string(criterion) + " aborted", e);
  }
  return s.take();
}

std::vector<CheckResult> runAll(const VerifyOptions& options) {
  std::vector<CheckResult> all;
  for (int k = 0; k <= 9; ++k) {
    auto r = runCriterion(k, options);
    all.insert(all.end(), r.begin(), r.end());
  }
  return all;
}

bool allPassed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.pass && !r.informational) return false;
  return true;
}

std::string formatResult(const CheckResult& r) {
  std::ostringstream os;
  os << (r.informational ? "INFO" : r.pass ? "PASS" : "FAIL") << "  ";
  os << (r.criterion ? "[" + std::to_string(r.criterion) + "] " : "[M] ") << r.name;
  os << "  residual=" << formatNumber(r.residual);
  if (!r.informational) os << " threshold=" << formatNumber(r.threshold);
  if (r.comparisons) os << " n=" << r.comparisons;
  if (r.oracle) os << " (oracle)";
  if (!r.detail.empty()) os << "  " << r.detail;
  return os.str();
}

}  // namespace qcf
