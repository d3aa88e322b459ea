// qcf: command-line driver for the spin-star, kernel and CNOT/discord computations.

#include "qcf/cnot_discord.hpp"
#include "qcf/config.hpp"
#include "qcf/kernels.hpp"
#include "qcf/oracles.hpp"
#include "qcf/report.hpp"
#include "qcf/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <set>

namespace {

using namespace qcf;
using nlohmann::json;

enum Exit { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kModelError = 3 };

struct Context {
  RunConfig cfg;
  std::string out;

  std::string path(const std::string& name) const { return (std::filesystem::path(out) / name).string(); }
};

const double kNan = std::numeric_limits<double>::quiet_NaN();

void announce(const std::string& file, std::size_t rows) { std::cout << "wrote " << file << " (" << rows << " rows)\n"; }

json layersJson(const RunConfig& cfg) {
  if (cfg.model.singleSector)
    return {{"single_sector", {{"lambda1", cfg.model.singleSector->lambda1}, {"lambda2", cfg.model.singleSector->lambda2}}}};
  json arr = json::array();
  for (const auto& l : cfg.model.layers.layers) arr.push_back({{"spins", l.spins}, {"coupling", l.coupling}});
  return {{"layers", arr}, {"spectrum", toString(cfg.model.spectrum)}};
}

json matrixJson(const Operator& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array(), c = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      r.push_back(m(i, j).real());
      c.push_back(m(i, j).imag());
    }
    re.push_back(r);
    im.push_back(c);
  }
  return {{"real", re}, {"imag", im}};
}

std::vector<Pole> polesAndReport(const Context& ctx, const FFunctions& f) {
  const auto grid = ctx.cfg.timeGrid.values();
  const double tol = ctx.cfg.tolerances.apply().pole;
  const auto poles = findPoles(f, grid.back(), tol);
  json arr = json::array();
  for (const auto& p : poles) arr.push_back({{"t", p.t}, {"function", p.function}});
  const json doc = {{"model", layersJson(ctx.cfg)},
                    {"horizon", grid.back()},
                    {"pole_tolerance", tol},
                    {"poles", arr},
                    {"first_pole", poles.empty() ? json(nullptr) : json(poles.front().t)}};
  writeFile(ctx.path("poles.json"), doc.dump(2) + "\n");
  std::cout << "wrote " << ctx.path("poles.json") << " (" << poles.size() << " poles)\n";
  if (!poles.empty())
    std::cerr << "warning: generator pole of " << poles.front().function << " at t = " << formatNumber(poles.front().t)
              << "; generator output stops before it\n";
  return poles;
}

int cmdSpinstarEvolve(const Context& ctx) {
  const FFunctions f(ctx.cfg.spectrum());
  const auto& r = ctx.cfg.initialState;
  const Operator rho0 = qubitState(r[0], r[1], r[2]);
  CsvTable ff({"t", "f12", "f3", "df12", "df3"});
  CsvTable traj({"t", "rho00_re", "rho00_im", "rho01_re", "rho01_im", "rho10_re", "rho10_im", "rho11_re", "rho11_im"});
  for (double t : ctx.cfg.timeGrid.values()) {
    const FValues v = f(t);
    ff.row(std::vector<double>{t, v.f12, v.f3, v.df12, v.df3});
    const Operator rho = reducedState(f, t, rho0, ctx.cfg.tolerances.apply().structural);
    traj.row(std::vector<double>{t, rho(0, 0).real(), rho(0, 0).imag(), rho(0, 1).real(), rho(0, 1).imag(),
                                 rho(1, 0).real(), rho(1, 0).imag(), rho(1, 1).real(), rho(1, 1).imag()});
  }
  writeFile(ctx.path("f_functions.csv"), ff.text());
  announce(ctx.path("f_functions.csv"), ff.rows());
  writeFile(ctx.path("trajectory.csv"), traj.text());
  announce(ctx.path("trajectory.csv"), traj.rows());
  return kOk;
}

int cmdSpinstarKraus(const Context& ctx) {
  const FFunctions f(ctx.cfg.spectrum());
  const Tolerances tol = ctx.cfg.tolerances.apply();
  json times = json::array();
  double worst = 0.0;
  for (double t : ctx.cfg.timeGrid.values()) {
    const ChoiMatrix s = spinStarChoi(f, t);
    const KrausSet k = krausFromChoi(s, tol.krausTruncation);
    const TpVerdict tp = isTracePreserving(k, tol.structural);
    worst = std::max(worst, tp.residual);
    json ops = json::array();
    for (std::size_t i = 0; i < k.operators.size(); ++i) {
      json op = matrixJson(k.operators[i]);
      op["weight"] = k.weights[i];
      ops.push_back(op);
    }
    json choiDiag = json::array();
    for (Eigen::Index i = 0; i < s.matrix.rows(); ++i) choiDiag.push_back(s.matrix(i, i).real());
    times.push_back({{"t", t},
                     {"operators", ops},
                     {"tp_residual", tp.residual},
                     {"trace_preserving", tp.tracePreserving},
                     {"choi_min_eigenvalue", isCompletelyPositive(s, tol.structural).minEigenvalue},
                     {"choi_diagonal", choiDiag},
                     {"dropped_eigenvalues", k.droppedEigenvalues}});
  }
  const json doc = {{"model", layersJson(ctx.cfg)},
                    {"basis", "ladder: I/sqrt2, sigma_plus, sigma_minus, sigma_z/sqrt2"},
                    {"truncation", tol.krausTruncation},
                    {"max_tp_residual", worst},
                    {"times", times}};
  writeFile(ctx.path("kraus.json"), doc.dump(2) + "\n");
  announce(ctx.path("kraus.json"), times.size());
  return kOk;
}

int cmdTcl(const Context& ctx) {
  const FFunctions f(ctx.cfg.spectrum());
  const Tolerances tol = ctx.cfg.tolerances.apply();
  const auto poles = polesAndReport(ctx, f);
  const double limit = poles.empty() ? std::numeric_limits<double>::infinity() : poles.front().t;
  CsvTable table({"t", "a", "b", "gamma_plus", "gamma_z"});
  std::vector<double> kept;
  for (double t : ctx.cfg.timeGrid.values()) {
    if (t >= limit) break;
    RealMatrix p;
    try {
      p = tclGenerator(f, t, tol.pole).matrix;
    } catch (const PoleEncountered&) {
      break;
    }
    const OperatorFormRates rates = operatorForm(p, tol.structural * std::max(1.0, p.cwiseAbs().maxCoeff()));
    table.row(std::vector<double>{t, p(1, 1), p(3, 3), rates.gammaPlus, rates.gammaZ});
    kept.push_back(t);
  }
  writeFile(ctx.path("tcl.csv"), table.text());
  announce(ctx.path("tcl.csv"), table.rows());

  // Integrated trajectory next to the exact one.
  const auto& r = ctx.cfg.initialState;
  const Operator rho0 = qubitState(r[0], r[1], r[2]);
  PropagationOptions popt;
  popt.poleTol = tol.pole;
  CsvTable traj({"t", "x", "y", "z", "x_exact", "y_exact", "z_exact"});
  std::vector<double> grid;
  for (double t : ctx.cfg.timeGrid.values())
    if (t >= 0.0) grid.push_back(t);
  try {
    const TclTrajectory tr = propagateTCL(f, rho0, grid, popt);
    for (const auto& w : tr.warnings) std::cerr << "warning: " << w << "\n";
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      const Operator& a = tr.states[i];
      const Operator b = reducedState(f, tr.times[i], rho0);
      auto bloch = [](const Operator& m) {
        return std::array<double, 3>{2.0 * m(0, 1).real(), -2.0 * m(0, 1).imag(), (m(0, 0) - m(1, 1)).real()};
      };
      const auto x = bloch(a), y = bloch(b);
      traj.row(std::vector<double>{tr.times[i], x[0], x[1], x[2], y[0], y[1], y[2]});
    }
  } catch (const PoleEncountered& e) {
    std::cerr << "warning: " << e.what() << "; no trajectory written\n";
  }
  writeFile(ctx.path("tcl_trajectory.csv"), traj.text());
  announce(ctx.path("tcl_trajectory.csv"), traj.rows());
  return kOk;
}

int cmdNz(const Context& ctx) {
  const BathSpectrum spec = ctx.cfg.spectrum();
  const FFunctions f(spec);
  polesAndReport(ctx, f);
  const bool single = spec.sectors.size() == 1;
  CsvTable lap({"u", "fhat12", "fhat3", "nz12", "nz3", "eta1_printed", "eta2_printed", "eta1_printed_2n", "eta2_printed_2n"});
  for (double u : ctx.cfg.uGrid.values()) {
    const LaplaceTransfer lt = laplaceTransfer(spec, u);
    const NzKernelLaplace nz = nzKernelLaplace(spec, u);
    PrintedEta eta{kNan, kNan, kNan, kNan};
    if (single)
      eta = printedEta(std::sqrt(spec.sectors[0].lambda1), std::sqrt(spec.sectors[0].lambda2), u, spec.totalSpins);
    lap.row(std::vector<double>{u, lt.matrix(1, 1), lt.matrix(3, 3), nz.matrix(1, 1), nz.matrix(3, 3), eta.eta1,
                                eta.eta2, eta.eta1Printed, eta.eta2Printed});
  }
  writeFile(ctx.path("nz_laplace.csv"), lap.text());
  announce(ctx.path("nz_laplace.csv"), lap.rows());

  TalbotOptions opt;
  opt.oscillationBound = spec.maxFrequency();
  auto invert = [&](const std::function<complex(complex)>& fhat, double t) {
    try {
      return inverseLaplaceTalbot(fhat, t, opt).value;
    } catch (const ConvergenceFailure& e) {
      std::cerr << "warning: " << e.what() << "\n";
      return kNan;
    }
  };
  CsvTable time({"t", "f12", "f3", "kernel12", "kernel3"});
  for (double t : ctx.cfg.timeGrid.values()) {
    if (t <= 0.0) continue;
    time.row(std::vector<double>{
        t, invert([&](complex u) { return laplaceF12(spec, u); }, t),
        invert([&](complex u) { return laplaceF3(spec, u); }, t),
        invert([&](complex u) { return nzKernelEntry(spec, u, NzEntry::Coherence); }, t),
        invert([&](complex u) { return nzKernelEntry(spec, u, NzEntry::Population); }, t)});
  }
  writeFile(ctx.path("nz_time.csv"), time.text());
  announce(ctx.path("nz_time.csv"), time.rows());
  return kOk;
}

std::string boolText(bool b) { return b ? "true" : "false"; }

int cmdCnot(const Context& ctx) {
  const auto& cc = ctx.cfg.cnot;
  const auto tGrid = cc.tGrid.values();
  const double cpTol = ctx.cfg.tolerances.apply().structural;
  CsvTable report({"c1", "c2", "c3", "t", "discord", "choi_min_eig", "cp_verdict", "paper_kraus_residual", "valid_state"});
  for (const auto& row : cpDiscordSweep(cc.c, tGrid, cpTol)) {
    report.row({formatNumber(row.c[0]), formatNumber(row.c[1]), formatNumber(row.c[2]), formatNumber(row.t),
                formatNumber(row.discord), formatNumber(row.choiMinEigenvalue), boolText(row.cpVerdict),
                formatNumber(row.paperKrausResidual), boolText(row.validState)});
    if (!row.validState && row.t == tGrid.front())
      std::cerr << "warning: c = (" << formatNumber(row.c[0]) << ", " << formatNumber(row.c[1]) << ", "
                << formatNumber(row.c[2]) << ") is not a valid Bell-diagonal state; discord left as nan\n";
  }
  writeFile(ctx.path("cnot_report.csv"), report.text());
  announce(ctx.path("cnot_report.csv"), report.rows());

  std::set<double> c3s;
  for (const auto& c : cc.c) c3s.insert(c[2]);
  CsvTable audit({"c3", "t", "gamma_variant", "gamma_squared", "residual", "oracle_residual", "deviation_mixed",
                  "deviation_up"});
  const Operator mixed = qubitState(0, 0, 0), up = qubitState(0, 0, 1);
  for (double c3 : c3s)
    for (double t : tGrid)
      for (GammaVariant v : {GammaVariant::Printed, GammaVariant::SinSquared, GammaVariant::SinDouble}) {
        const double g2 = gammaSquared(c3, t, v);
        double res = kNan, ref = kNan, devMixed = kNan, devUp = kNan;
        if (g2 >= 0.0) {
          const auto ops = paperKraus(c3, t, v);
          res = isTracePreserving(ops).residual;
          ref = oracle::paperKrausResidualSymbolic(c3, t, v);
          const Operator target = reducedEvolved(c3, t);
          devMixed = (applyKraus(ops, mixed) - target).cwiseAbs().maxCoeff();
          devUp = (applyKraus(ops, up) - target).cwiseAbs().maxCoeff();
        }
        audit.row({formatNumber(c3), formatNumber(t), toString(v), formatNumber(g2), formatNumber(res),
                   formatNumber(ref), formatNumber(devMixed), formatNumber(devUp)});
      }
  writeFile(ctx.path("kraus_audit.csv"), audit.text());
  announce(ctx.path("kraus_audit.csv"), audit.rows());
  return kOk;
}

int cmdDiscord(const Context& ctx) {
  DiscordOptions opt;
  opt.polarPoints = ctx.cfg.discord.polarPoints;
  opt.azimuthPoints = ctx.cfg.discord.azimuthPoints;
  opt.starts = ctx.cfg.discord.starts;
  opt.seed = ctx.cfg.seed;
  CsvTable table({"c1", "c2", "c3", "valid_state", "mutual_information", "classical_correlation", "discord_closed_form",
                  "discord_numerical", "difference", "axis_x", "axis_y", "axis_z"});
  for (const auto& c : ctx.cfg.cnot.c) {
    const BellDiagonalState st{c};
    if (!st.valid()) {
      table.row({formatNumber(c[0]), formatNumber(c[1]), formatNumber(c[2]), "false", "nan", "nan", "nan", "nan", "nan",
                 "nan", "nan", "nan"});
      continue;
    }
    const DiscordResult closed = discordClosedForm(st);
    const DiscordResult num = discordNumerical(jointState(st), opt);
    table.row({formatNumber(c[0]), formatNumber(c[1]), formatNumber(c[2]), "true", formatNumber(closed.mutualInformation),
               formatNumber(closed.classicalCorrelation), formatNumber(closed.discord), formatNumber(num.discord),
               formatNumber(num.discord - closed.discord), formatNumber(num.axis->x()), formatNumber(num.axis->y()),
               formatNumber(num.axis->z())});
  }
  writeFile(ctx.path("discord.csv"), table.text());
  announce(ctx.path("discord.csv"), table.rows());
  return kOk;
}

int cmdVerify(const Context& ctx, const std::vector<int>& only) {
  VerifyOptions opt;
  opt.threshold = ctx.cfg.tolerances.verify;
  opt.seed = ctx.cfg.seed;
  const auto start = std::chrono::steady_clock::now();
  std::vector<CheckResult> all;
  const std::vector<int> which = only.empty() ? std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9} : only;
  for (int k : which) {
    const auto part = runCriterion(k, opt);
    for (const auto& r : part) std::cout << formatResult(r) << "\n" << std::flush;
    all.insert(all.end(), part.begin(), part.end());
  }
  long failed = 0, oracleChecks = 0, oracleComparisons = 0;
  for (const auto& r : all) {
    if (!r.pass && !r.informational) ++failed;
    if (r.oracle) {
      ++oracleChecks;
      oracleComparisons += r.comparisons;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << "\nchecks: " << all.size() << ", failed: " << failed << "\n";
  std::cout << "oracle-equivalence checks: " << oracleChecks << " (" << oracleComparisons << " comparisons)\n";
  std::cout << "elapsed: " << formatNumber(secs) << " s\n";
  std::cout << (failed ? "VERIFY FAILED" : "VERIFY OK") << "\n";
  return failed ? kVerifyFailed : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qcf: open-system dynamics of a qubit (spin star, TCL/NZ kernels, CNOT and discord)"};
  app.require_subcommand(1);
  std::string configPath, outDir;
  std::optional<std::uint64_t> seed;
  std::vector<int> only;

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const Context&);
  };
  const Command commands[] = {
      {"spinstar-evolve", "f12/f3 functions and reduced-state trajectory", cmdSpinstarEvolve},
      {"spinstar-kraus", "Choi matrices and Kraus sets on the time grid", cmdSpinstarKraus},
      {"tcl", "TCL generator, operator-form rates, poles, integrated trajectory", cmdTcl},
      {"nz", "NZ kernel in the Laplace domain and via Talbot inversion", cmdNz},
      {"cnot", "CNOT pin map: CP verdicts, discord, audit of the printed Kraus set", cmdCnot},
      {"discord", "closed-form and numerically optimized discord", cmdDiscord},
  };
  std::map<CLI::App*, const Command*> lookup;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", configPath, "JSON run configuration")->required();
    sub->add_option("--out", outDir, "output directory (overrides output_dir)");
    sub->add_option("--seed", seed, "seed for randomized starts");
    lookup[sub] = &c;
  }
  CLI::App* verify = app.add_subcommand("verify", "run the verification suite");
  verify->add_option("--config", configPath, "JSON run configuration (tolerance override, seed)");
  verify->add_option("--out", outDir, "unused; accepted for uniformity");
  verify->add_option("--seed", seed, "seed for randomized inputs");
  verify->add_option("--criterion", only, "run only these criteria (0 = module invariants)")->check(CLI::Range(0, 9));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  Context ctx;
  try {
    if (!configPath.empty()) ctx.cfg = loadConfig(configPath);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  if (seed) ctx.cfg.seed = *seed;
  ctx.out = outDir.empty() ? ctx.cfg.outputDir : outDir;

  try {
    if (verify->parsed()) return cmdVerify(ctx, only);
    for (const auto& [sub, cmd] : lookup)
      if (sub->parsed()) return cmd->run(ctx);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kModelError;
  }
  return kOk;
}
