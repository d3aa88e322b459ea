#include "helpers.hpp"
#include "qcf/cnot_discord.hpp"
#include "qcf/oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace qcf;
using testing::maxAbs;

namespace {

constexpr double kPi = std::numbers::pi;

Operator partialTraceEvolved(const BellDiagonalState& s, double t) {
  const Operator u = cnotUnitary(t);
  return partialTrace(Operator(u * jointState(s) * u.adjoint()), 2, 2, Keep::First);
}

std::vector<BellDiagonalState> randomBellDiagonal(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<BellDiagonalState> out;
  while (static_cast<int>(out.size()) < n) {
    const BellDiagonalState s{{d(rng), d(rng), d(rng)}};
    if (s.valid()) out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_SUITE("cnot_discord") {
  TEST_CASE("unitary examples") {
    CHECK(maxAbs(cnotUnitary(0.0) - Operator::Identity(4, 4)) < 1e-15);
    const double t = 0.83;
    const Operator u = cnotUnitary(t);
    CHECK(std::abs(u(0, 0) - std::exp(-I_unit * t)) < 1e-15);
    CHECK(std::abs(u(1, 1) - std::cos(t)) < 1e-15);
    CHECK(std::abs(u(1, 3) + I_unit * std::sin(t)) < 1e-15);
    CHECK(maxAbs(u * u.adjoint() - Operator::Identity(4, 4)) < 1e-14);
    // At pi/2 the control-1 block swaps the target up to a phase.
    const Operator half = cnotUnitary(kPi / 2);
    CHECK(std::abs(std::abs(half(3, 1)) - 1.0) < 1e-15);
    CHECK(std::abs(std::abs(half(1, 3)) - 1.0) < 1e-15);
    CHECK(std::abs(half(1, 1)) < 1e-15);
  }

  TEST_CASE("closed-form unitary matches the exponential") {
    const Operator h = cnotHamiltonian();
    CHECK(hermiticityResidual(h) == 0.0);
    for (double t : testing::linspace(0.0, 2 * kPi, 50)) {
      CHECK((cnotUnitary(t) - cnotUnitaryExp(t)).norm() < 1e-12);
      // Independent route through Eigen's solver.
      Eigen::SelfAdjointEigenSolver<Operator> es(h);
      Vector<complex> ph(4);
      for (int i = 0; i < 4; ++i) ph(i) = std::exp(-I_unit * es.eigenvalues()(i) * t);
      CHECK((cnotUnitary(t) - es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint()).norm() < 1e-12);
    }
  }

  TEST_CASE("Bell-diagonal states") {
    const BellDiagonalState s{{0.4, 0.3, 0.2}};
    CHECK(s.valid());
    const auto e = s.eigenvalues();
    const Operator rho = jointState(s);
    Eigen::SelfAdjointEigenSolver<Operator> es(rho);
    std::array<double, 4> sorted = e;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 4; ++i) CHECK(std::abs(es.eigenvalues()(i) - sorted[static_cast<std::size_t>(i)]) < 1e-14);
    CHECK(std::abs(rho.trace() - 1.0) < 1e-15);
    const BellDiagonalState bad{{1.0, 1.0, 1.0}};
    CHECK_FALSE(bad.valid());
    CHECK_THROWS_AS(bad.require(), InvalidState);
    CHECK_THROWS_AS(jointState(bad), InvalidState);
  }

  TEST_CASE("reduced state examples") {
    for (double t : {0.0, 0.7, 2.0}) CHECK(maxAbs(reducedEvolved(0.0, t) - qubitState(0, 0, 0)) < 1e-15);
    Operator up = Operator::Zero(2, 2);
    up(0, 0) = 1.0;
    CHECK(maxAbs(reducedEvolved(1.0, kPi / 2) - up) < 1e-15);
  }

  TEST_CASE("reduced state matches the partial-trace oracle and ignores c1, c2") {
    std::mt19937_64 rng(41);
    for (const auto& s : randomBellDiagonal(rng, 20)) {
      for (double t : {0.0, 0.4, 1.9, 3.0}) {
        const Operator exact = partialTraceEvolved(s, t);
        CHECK(maxAbs(reducedEvolved(s.c[2], t) - exact) < 1e-12);
        const BellDiagonalState other{{0.0, 0.0, s.c[2]}};
        CHECK(maxAbs(partialTraceEvolved(other, t) - exact) < 1e-12);
      }
    }
  }

  TEST_CASE("pin map") {
    const TransferMatrix f0 = pinMapTransfer(0.5, 0.0);
    RealMatrix expected = RealMatrix::Zero(4, 4);
    expected(0, 0) = 1.0;
    CHECK(maxAbs(f0.matrix - expected) < 1e-15);
    std::mt19937_64 rng(42);
    for (double c3 : {-1.0, -0.3, 0.5, 1.0}) {
      for (double t : {0.2, 1.0, 2.5}) {
        const TransferMatrix f = pinMapTransfer(c3, t);
        const Operator rho = testing::randomState(rng, 2);
        CHECK(maxAbs(applyTransfer(f, rho) - reducedEvolved(c3, t)) < 1e-14);
        const ChoiMatrix s = choiFromTransfer(f);
        CHECK(isCompletelyPositive(s).minEigenvalue >= -1e-10);
        CHECK(oracle::standardChoiMinEigenvalue(f) >= -1e-10);
        CHECK(isTracePreserving(krausFromChoi(s)).residual <= 1e-10);
      }
    }
  }

  TEST_CASE("printed Kraus set") {
    const auto ops = paperKraus(0.0, 0.0);
    REQUIRE(ops.size() == 4);
    const double g = std::sqrt(gammaSquared(0.0, 0.0, GammaVariant::Printed));
    CHECK(g == 1.0);
    const double residual = isTracePreserving(ops).residual;
    CHECK(std::abs(residual - oracle::paperKrausResidualSymbolic(0.0, 0.0, GammaVariant::Printed)) < 1e-12);
    CHECK(std::abs(residual - std::sqrt(2.0) * 0.25) < 1e-12);
    for (auto v : {GammaVariant::Printed, GammaVariant::SinSquared, GammaVariant::SinDouble}) {
      for (double c3 : {-0.8, 0.0, 0.5, 1.0}) {
        for (double t : {0.0, 0.6, 1.5, 2.8}) {
          const double r = isTracePreserving(paperKraus(c3, t, v)).residual;
          CHECK(std::abs(r - oracle::paperKrausResidualSymbolic(c3, t, v)) < 1e-12);
          CHECK(std::abs(r - oracle::paperKrausResidualClosedForm(c3, t, v)) < 1e-12);
        }
      }
    }
    CHECK(toString(GammaVariant::SinDouble) == std::string("sin_2t"));
    CHECK(gammaSquared(0.5, kPi / 2, GammaVariant::SinSquared) == doctest::Approx(0.5));
    CHECK_THROWS_AS(paperKraus(2.0, kPi / 2), DomainError);
  }

  TEST_CASE("entropy") {
    CHECK(entropyBits(qubitState(0, 0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(entropyBits(qubitState(0, 0, 1))) < 1e-12);
    CHECK(entropyBits(Operator::Identity(4, 4) / 4.0) == doctest::Approx(2.0));
  }

  TEST_CASE("discord examples") {
    Vector<complex> phi = Vector<complex>::Zero(4);
    phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
    const DiscordResult bell = discordNumerical(phi * phi.adjoint());
    CHECK(std::abs(bell.discord - 1.0) < 1e-6);
    CHECK(bell.axis.has_value());
    CHECK(std::abs(discordClosedForm(BellDiagonalState{{1.0, -1.0, 1.0}}).discord - 1.0) < 1e-12);

    std::mt19937_64 rng(43);
    const Operator product = tensorProduct(testing::randomState(rng, 2), testing::randomState(rng, 2));
    CHECK(std::abs(discordNumerical(product).discord) < 1e-9);
    CHECK(std::abs(discordClosedForm(BellDiagonalState{}).discord) < 1e-15);

    for (double c3 : {-1.0, -0.4, 0.5, 1.0}) {
      const BellDiagonalState s{{0.0, 0.0, c3}};
      CHECK(std::abs(discordClosedForm(s).discord) < 1e-12);
      CHECK(std::abs(discordNumerical(jointState(s)).discord) < 1e-9);
    }
  }

  TEST_CASE("discord regression value") {
    const BellDiagonalState s{{0.4, 0.3, 0.2}};
    const DiscordResult closed = discordClosedForm(s);
    const DiscordResult numeric = discordNumerical(jointState(s));
    CHECK(std::abs(closed.discord - 0.17843338121763663) < 1e-12);
    CHECK(std::abs(closed.mutualInformation - 0.29714248198694393) < 1e-12);
    CHECK(std::abs(numeric.discord - closed.discord) < 1e-6);
  }

  TEST_CASE("closed form and optimizer agree on random Bell-diagonal states") {
    std::mt19937_64 rng(44);
    for (const auto& s : randomBellDiagonal(rng, 20)) {
      const DiscordResult a = discordClosedForm(s);
      const DiscordResult b = discordNumerical(jointState(s));
      CHECK(std::abs(a.discord - b.discord) < 1e-6);
      CHECK(b.discord >= -1e-9);
      const Operator rho = jointState(s);
      const double marginal = std::min(entropyBits(partialTrace(rho, 2, 2, Keep::First)),
                                       entropyBits(partialTrace(rho, 2, 2, Keep::Second)));
      CHECK(b.discord <= marginal + 1e-9);
    }
  }

  TEST_CASE("optimizer is deterministic under a fixed seed") {
    std::mt19937_64 rng(45);
    const Operator rho = testing::randomState(rng, 4);
    DiscordOptions o;
    o.seed = 7;
    const DiscordResult a = discordNumerical(rho, o), b = discordNumerical(rho, o);
    CHECK(a.discord == b.discord);
    CHECK(a.discord >= -1e-9);
    CHECK_THROWS_AS(discordNumerical(Operator::Identity(2, 2) / 2.0), DimensionMismatch);
  }

  TEST_CASE("sweep rows") {
    const auto rows = cpDiscordSweep({{0.4, 0.3, 0.2}, {0.0, 0.0, 0.5}, {1.0, 1.0, 1.0}}, {0.0, 1.0, 2.0});
    REQUIRE(rows.size() == 9);
    for (const auto& r : rows) {
      if (r.c[0] == 0.4) {
        CHECK(r.validState);
        CHECK(r.discord > 0.05);
        CHECK(r.cpVerdict);
      } else if (r.c[2] == 0.5) {
        CHECK(r.validState);
        CHECK(std::abs(r.discord) < 1e-12);
        CHECK(r.cpVerdict);
      } else {
        CHECK_FALSE(r.validState);
        CHECK(std::isnan(r.discord));
      }
      if (r.validState) CHECK(r.choiMinEigenvalue >= -1e-10);
    }
  }
}
