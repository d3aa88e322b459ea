#include "helpers.hpp"
#include "qcf/oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace qcf;
using testing::layers;
using testing::maxAbs;

namespace {

constexpr double kPi = std::numbers::pi;

FFunctions fFor(const LayerConfig& cfg) { return FFunctions(bathSpectrum(cfg)); }

bool hasSector(const BathSpectrum& s, double w, double l1, double l2) {
  return std::any_of(s.sectors.begin(), s.sectors.end(), [&](const BathSector& x) {
    return std::abs(x.weight - w) < 1e-12 && std::abs(x.lambda1 - l1) < 1e-9 && std::abs(x.lambda2 - l2) < 1e-9;
  });
}

std::vector<LayerConfig> smallConfigs() {
  return {layers({{1, 1.0}}),           layers({{2, 1.0}}),           layers({{3, 0.7}}),
          layers({{1, 1.0}, {1, 0.5}}), layers({{2, 0.4}, {3, 1.1}}), layers({{3, 0.5}, {2, 1.0}}),
          layers({{2, 0.3}, {2, 0.6}, {2, 1.0}}), layers({{4, 0.3}, {3, 0.6}, {2, 1.0}}), layers({{10, 0.8}}),
          layers({{5, 0.2}, {5, 0.9}})};
}

}  // namespace

TEST_SUITE("spin_star") {
  TEST_CASE("one bath spin has two sectors") {
    for (const auto& s : {bathSpectrumBrute(layers({{1, 1.0}})), bathSpectrumCombinatorial(layers({{1, 1.0}}))}) {
      CHECK(s.sectors.size() == 2);
      CHECK(hasSector(s, 1, 1, 0));
      CHECK(hasSector(s, 1, 0, 1));
      CHECK(s.totalWeight() == doctest::Approx(2.0));
    }
  }

  TEST_CASE("two bath spins: triplet and singlet") {
    for (const auto& s : {bathSpectrumBrute(layers({{2, 1.0}})), bathSpectrumCombinatorial(layers({{2, 1.0}}))}) {
      CHECK(s.sectors.size() == 4);
      CHECK(hasSector(s, 1, 2, 0));
      CHECK(hasSector(s, 1, 2, 2));
      CHECK(hasSector(s, 1, 0, 2));
      CHECK(hasSector(s, 1, 0, 0));
      CHECK(s.totalWeight() == doctest::Approx(4.0));
    }
  }

  TEST_CASE("zero coupling collapses to one sector") {
    const LayerConfig cfg = layers({{3, 0.0}, {2, 0.0}});
    for (const auto& s : {bathSpectrumBrute(cfg), bathSpectrumCombinatorial(cfg), bathSpectrumCoupled(cfg)}) {
      REQUIRE(s.sectors.size() == 1);
      CHECK(hasSector(s, 32, 0, 0));
    }
  }

  TEST_CASE("combinatorial weights sum to 2^N") {
    CHECK(bathSpectrumCombinatorial(layers({{3, 0.5}, {2, 1.0}})).totalWeight() == doctest::Approx(32.0));
    CHECK(bathSpectrumCombinatorial(layers({{40, 0.1}, {30, 0.2}})).totalWeight() == doctest::Approx(std::ldexp(1.0, 70)));
    for (const auto& cfg : smallConfigs()) {
      CHECK(bathSpectrumCoupled(cfg).totalWeight() == doctest::Approx(std::ldexp(1.0, cfg.totalSpins())));
    }
  }

  TEST_CASE("combinatorial and brute-force spectra give the same f") {
    const auto grid = testing::linspace(0.0, 3.0, 200);
    for (const auto& cfg : smallConfigs()) {
      const FFunctions a(bathSpectrumCombinatorial(cfg)), b(bathSpectrumBrute(cfg));
      double worst = 0.0;
      for (double t : grid) {
        const FValues x = a(t), y = b(t);
        worst = std::max({worst, std::abs(x.f12 - y.f12), std::abs(x.f3 - y.f3), std::abs(x.df12 - y.df12) / 10,
                          std::abs(x.df3 - y.df3) / 10});
      }
      CHECK(worst < 1e-12);
    }
  }

  TEST_CASE("spectra agree with dense cosine traces") {
    for (const auto& cfg : {layers({{2, 1.0}}), layers({{1, 1.0}, {1, 0.5}}), layers({{2, 0.4}, {3, 1.1}})}) {
      const FFunctions layered(bathSpectrumBrute(cfg)), coupled(bathSpectrumCoupled(cfg));
      for (double t : {0.1, 0.77, 2.3}) {
        const auto l = oracle::cosineTraces(cfg, t, oracle::BathOperators::Layered);
        const auto c = oracle::cosineTraces(cfg, t, oracle::BathOperators::Coupled);
        CHECK(std::abs(layered(t).f12 - l.f12) < 1e-12);
        CHECK(std::abs(layered(t).f3 - l.f3) < 1e-12);
        CHECK(std::abs(coupled(t).f12 - c.f12) < 1e-12);
        CHECK(std::abs(coupled(t).f3 - c.f3) < 1e-12);
      }
    }
  }

  TEST_CASE("layered and coupled operators differ for distinct couplings") {
    const LayerConfig cfg = layers({{1, 1.0}, {1, 0.5}});
    const double a = FFunctions(bathSpectrumBrute(cfg))(0.3).f3;
    const double b = FFunctions(bathSpectrumCoupled(cfg))(0.3).f3;
    CHECK(std::abs(a - b) > 1e-3);
    CHECK(bathSpectrum(cfg).sectors.size() == bathSpectrumCoupled(cfg).sectors.size());
  }

  TEST_CASE("spectrum size limits and validation") {
    CHECK_THROWS_AS(bathSpectrumBrute(layers({{13, 1.0}})), ModelLimit);
    CHECK_THROWS_AS(bathSpectrumCoupled(layers({{7, 1.0}, {6, 0.5}})), ModelLimit);
    CHECK_THROWS_AS(bathSpectrum(LayerConfig{}), DomainError);
    CHECK_THROWS_AS(bathSpectrum(layers({{0, 1.0}})), DomainError);
    CHECK((parseSpectrumKind("coupled") == SpectrumKind::Coupled));
    CHECK(toString(parseSpectrumKind("brute")) == std::string("brute"));
    CHECK_THROWS_AS(parseSpectrumKind("dense"), DomainError);
  }

  TEST_CASE("one-spin closed forms") {
    const FFunctions f = fFor(layers({{1, 1.0}}));
    for (double t : testing::linspace(0.0, 3.0, 31)) {
      const FValues v = f(t);
      CHECK(std::abs(v.f3 - 0.5 * (1.0 + std::cos(4.0 * t))) < 1e-14);
      CHECK(std::abs(v.f12 - std::cos(2.0 * t)) < 1e-14);
      CHECK(std::abs(v.df3 + 2.0 * std::sin(4.0 * t)) < 1e-13);
      CHECK(std::abs(v.df12 + 2.0 * std::sin(2.0 * t)) < 1e-13);
    }
  }

  TEST_CASE("two-spin closed form for f3") {
    const FFunctions f = fFor(layers({{2, 1.0}}));
    for (double t : {0.2, 0.9, 1.7}) CHECK(std::abs(f(t).f3 - 0.5 * (1.0 + std::cos(4.0 * std::sqrt(2.0) * t))) < 1e-14);
  }

  TEST_CASE("f is even, bounded and flat at zero") {
    for (const auto& cfg : demoConfigs()) {
      const FFunctions f = fFor(cfg);
      const FValues z = f(0.0);
      CHECK(std::abs(z.f12 - 1.0) < 1e-12);
      CHECK(std::abs(z.f3 - 1.0) < 1e-12);
      CHECK(z.df12 == 0.0);
      CHECK(z.df3 == 0.0);
      for (double t : testing::linspace(0.01, 3.0, 50)) {
        const FValues p = f(t), m = f(-t);
        CHECK(std::abs(p.f12 - m.f12) < 1e-14);
        CHECK(std::abs(p.f3 - m.f3) < 1e-14);
        CHECK(std::abs(p.f12) <= 1.0 + 1e-12);
        CHECK(std::abs(p.f3) <= 1.0 + 1e-12);
        // Analytic derivative against a central difference.
        const double h = 1e-5;
        CHECK(std::abs((f(t + h).f3 - f(t - h).f3) / (2 * h) - p.df3) < 1e-6);
        CHECK(std::abs((f(t + h).f12 - f(t - h).f12) / (2 * h) - p.df12) < 1e-6);
      }
    }
  }

  TEST_CASE("reduced state examples") {
    const FFunctions f = fFor(layers({{1, 1.0}}));
    for (double t : {0.0, 0.4, 2.2}) CHECK(maxAbs(reducedState(f, t, qubitState(0, 0, 0)) - qubitState(0, 0, 0)) < 1e-15);
    // f3(pi/4) = 0 for one bath spin.
    CHECK(maxAbs(reducedState(f, kPi / 4, qubitState(0, 0, 1)) - qubitState(0, 0, 0)) < 1e-15);
    const Operator r = reducedState(f, kPi / 8, qubitState(0, 0, 1));
    CHECK(std::abs(r(0, 0) - 0.75) < 1e-15);
    CHECK(std::abs(r(1, 1) - 0.25) < 1e-15);
    CHECK_THROWS_AS(reducedState(f, 0.1, Operator::Identity(2, 2)), InvalidState);
    CHECK_THROWS_AS(reducedState(f, 0.1, Operator::Identity(4, 4) / 4.0), InvalidState);
  }

  TEST_CASE("reduced state matches the joint unitary evolution") {
    std::mt19937_64 rng(21);
    for (const auto& cfg : {layers({{1, 1.0}}), layers({{2, 1.0}}), layers({{3, 0.5}, {2, 1.0}}),
                            layers({{2, 0.3}, {2, 0.6}, {2, 1.0}})}) {
      const FFunctions f = fFor(cfg);
      const oracle::JointEvolution joint(cfg);
      std::vector<Operator> inputs;
      for (int i = 0; i < 4; ++i) inputs.push_back(testing::randomState(rng, 2));
      for (double t : {0.0, 0.35, 1.1, 2.9}) {
        const auto exact = joint.reducedStates(t, inputs);
        for (std::size_t i = 0; i < inputs.size(); ++i)
          CHECK(maxAbs(reducedState(f, t, inputs[i]) - exact[i]) < 1e-10);
      }
    }
  }

  TEST_CASE("transfer matrix examples") {
    const FFunctions f = fFor(layers({{1, 1.0}}));
    CHECK(maxAbs(transferMatrix(f, 0.0).matrix - RealMatrix::Identity(4, 4)) < 1e-15);
    RealMatrix expected = RealMatrix::Zero(4, 4);
    expected.diagonal() << 1.0, std::sqrt(0.5), std::sqrt(0.5), 0.5;
    CHECK(maxAbs(transferMatrix(f, kPi / 8).matrix - expected) < 1e-15);
    CHECK(std::abs(transferMatrix(f, kPi / 4).matrix(1, 1)) < 1e-15);
    CHECK(std::abs(transferMatrix(f, kPi / 4).matrix(3, 3)) < 1e-15);
  }

  TEST_CASE("transfer matrix by three routes") {
    const HermitianBasis w = pauliBasis();
    for (const auto& cfg : {layers({{2, 1.0}}), layers({{3, 0.5}, {2, 1.0}})}) {
      const FFunctions f = fFor(cfg);
      const oracle::JointEvolution joint(cfg);
      for (double t : {0.3, 1.4, 2.6}) {
        const RealMatrix direct = transferMatrix(f, t).matrix;
        CHECK(maxAbs(transferFromMap(spinStarImages(f, t), w).matrix - direct) < 1e-12);
        CHECK(maxAbs(transferFromMap(joint.images(t), w).matrix - direct) < 1e-10);
      }
    }
  }

  TEST_CASE("generator L") {
    const FFunctions f = fFor(layers({{1, 1.0}}));
    CHECK(maxAbs(generatorL(f, 0.0).matrix) == 0.0);
    CHECK(maxAbs(generatorL(f, 1e-9).matrix) < 1e-7);
    for (double t : {0.1, 0.5, 1.0}) {
      const RealMatrix l = generatorL(f, t).matrix;
      CHECK(std::abs(l(3, 3) + 4.0 * std::tan(2.0 * t)) < 1e-12 * std::max(1.0, std::abs(l(3, 3))));
      CHECK(std::abs(l(1, 1) + 2.0 * std::tan(2.0 * t)) < 1e-12 * std::max(1.0, std::abs(l(1, 1))));
      CHECK(l(1, 1) == l(2, 2));
      // dF/dt = L F.
      const FValues v = f(t);
      CHECK(std::abs(l(3, 3) * v.f3 - v.df3) < 1e-12);
    }
  }

  TEST_CASE("generator poles carry the vanishing function") {
    try {
      generatorL(fFor(layers({{1, 1.0}})), kPi / 4);
      FAIL("expected a pole");
    } catch (const PoleEncountered& e) {
      CHECK(e.function() == "f12");
      CHECK(e.time() == doctest::Approx(kPi / 4));
    }
    // Two spins: f3 vanishes at pi/(4 sqrt2) while f12 = 1/4.
    const FFunctions f2 = fFor(layers({{2, 1.0}}));
    const double t = kPi / (4 * std::sqrt(2.0));
    CHECK(std::abs(f2(t).f12 - 0.25) < 1e-14);
    try {
      generatorL(f2, t);
      FAIL("expected a pole");
    } catch (const PoleEncountered& e) {
      CHECK(e.function() == "f3");
    }
    CHECK_THROWS_AS(spinStarGeneratorChoi(f2, t), PoleEncountered);
  }

  TEST_CASE("Choi matrix S is diagonal in the ladder basis") {
    for (const auto& cfg : demoConfigs()) {
      const FFunctions f = fFor(cfg);
      for (double t : testing::linspace(0.0, 3.0, 40)) {
        const FValues v = f(t);
        const ChoiMatrix s = spinStarChoi(f, t);
        Operator expected = Operator::Zero(4, 4);
        expected.diagonal() << 0.5 * (1 + 2 * v.f12 + v.f3), 0.5 * (1 - v.f3), 0.5 * (1 - v.f3),
            0.5 * (1 - 2 * v.f12 + v.f3);
        CHECK(maxAbs(s.matrix - expected) < 1e-12);
        CHECK(std::abs(s.matrix.trace() - 2.0) < 1e-12);
        CHECK(isCompletelyPositive(s).completelyPositive);
      }
    }
    const ChoiMatrix s0 = spinStarChoi(fFor(layers({{1, 1.0}})), 0.0);
    CHECK(std::abs(s0.matrix(0, 0) - 2.0) < 1e-14);
  }

  TEST_CASE("Kraus operators against the printed forms") {
    const HermitianBasis w = pauliBasis();
    const FFunctions f = fFor(layers({{3, 0.5}, {2, 1.0}}));
    for (double t : {0.0, 0.3, 1.2, 2.5}) {
      const FValues v = f(t);
      const double c1 = std::sqrt(std::max(0.0, 0.5 * (1 + 2 * v.f12 + v.f3)));
      const double c23 = std::sqrt(std::max(0.0, 0.5 * (1 - v.f3)));
      const double c4 = std::sqrt(std::max(0.0, 0.5 * (1 - 2 * v.f12 + v.f3)));
      const std::vector<Operator> printed = {c1 * w[0], c23 * w[1], c23 * w[2], c4 * w[3]};
      CHECK(isTracePreserving(printed).residual < 1e-12);

      const KrausSet ks = spinStarKraus(f, t);
      CHECK(isTracePreserving(ks).residual < 1e-10);
      // M1 and M4 are the only operators along I and sz; match them up to phase.
      auto matchUpToPhase = [&](const Operator& target) {
        for (const auto& m : ks.operators) {
          const complex overlap = (m.adjoint() * target).trace();
          if (std::abs(std::abs(overlap) - target.squaredNorm()) < 1e-10 && target.squaredNorm() > 1e-10) {
            const Operator aligned = m * (overlap / std::abs(overlap));
            return maxAbs(aligned - target) < 1e-10;
          }
        }
        return target.squaredNorm() <= 1e-10;
      };
      CHECK(matchUpToPhase(printed[0]));
      CHECK(matchUpToPhase(printed[3]));
      // The {M2, M3} pair induces the same channel as the extracted pair.
      std::vector<Operator> pair, extractedPair;
      pair = {printed[1], printed[2]};
      for (const auto& m : ks.operators)
        if (std::abs(m.trace()) < 1e-12 && std::abs((m * pauli::z()).trace()) < 1e-12) extractedPair.push_back(m);
      std::mt19937_64 rng(22);
      for (int i = 0; i < 5; ++i) {
        const Operator rho = testing::randomState(rng, 2);
        CHECK(maxAbs(applyKraus(pair, rho) - applyKraus(extractedPair, rho)) < 1e-10);
        CHECK(maxAbs(applyKraus(ks, rho) - reducedState(f, t, rho)) < 1e-10);
      }
    }
    const KrausSet id = spinStarKraus(fFor(layers({{1, 1.0}})), 0.0);
    REQUIRE(id.operators.size() == 1);
    CHECK(maxAbs(id.operators[0] * id.operators[0].adjoint() - Operator::Identity(2, 2)) < 1e-12);
  }

  TEST_CASE("generator Choi matrix R in the matrix-unit basis") {
    for (const auto& cfg : demoConfigs()) {
      const FFunctions f = fFor(cfg);
      for (double t : {0.05, 0.21, 0.33}) {
        const FValues v = f(t);
        const double a = v.df12 / v.f12, b = v.df3 / v.f3;
        const ChoiMatrix r = spinStarGeneratorChoi(f, t);
        Operator expected = Operator::Zero(4, 4);
        expected(0, 0) = expected(1, 1) = b / 2;
        expected(0, 1) = expected(1, 0) = a;
        expected(2, 2) = expected(3, 3) = -b / 2;
        CHECK(maxAbs(r.matrix - expected) < 1e-10 * std::max(1.0, std::abs(b)));
        // Lambda(rho) = (L r)^T W.
        const HermitianBasis w = pauliBasis();
        const RealMatrix l = generatorL(f, t).matrix;
        std::mt19937_64 rng(23);
        const Operator rho = testing::randomState(rng, 2);
        const RealVector lr = l * blochExpand(rho, w).r;
        CHECK(maxAbs(applyGenerator(r, rho) - blochReconstruct({lr}, w)) < 1e-10);
      }
    }
  }
}
