#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

/// Fresh scratch directory under the system temp dir, removed on scope exit.
class Scratch {
 public:
  explicit Scratch(const std::string& name) : dir_(fs::temp_directory_path() / ("qcf_cli_" + name)) {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }
  fs::path operator/(const std::string& p) const { return dir_ / p; }
  const fs::path& path() const { return dir_; }

 private:
  fs::path dir_;
};

void writeText(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string readText(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(QCF_BINARY) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    FAIL("missing column " << name);
    return 0;
  }
  double value(std::size_t row, const std::string& name) const { return std::stod(rows[row][column(name)]); }
};

Csv readCsv(const fs::path& p) {
  std::ifstream in(p);
  Csv out;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  if (std::getline(in, line)) out.header = split(line);
  while (std::getline(in, line))
    if (!line.empty()) out.rows.push_back(split(line));
  return out;
}

std::string args(const fs::path& config, const fs::path& out) {
  return "--config " + config.string() + " --out " + out.string();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("spinstar-evolve for one bath spin") {
    Scratch s("evolve");
    writeText(s / "c.json", R"({"model": {"layers": [{"spins": 1, "coupling": 1.0}]},
                                "time_grid": {"start": 0, "end": 3, "points": 61}})");
    REQUIRE(run("spinstar-evolve " + args(s / "c.json", s / "out"), s / "log") == 0);
    const Csv f = readCsv(s / "out/f_functions.csv");
    CHECK(f.header == std::vector<std::string>{"t", "f12", "f3", "df12", "df3"});
    REQUIRE(f.rows.size() == 61);
    CHECK(f.value(0, "f12") == 1.0);
    CHECK(f.value(0, "f3") == 1.0);
    for (std::size_t i = 0; i < f.rows.size(); ++i) {
      const double t = f.value(i, "t");
      CHECK(std::abs(f.value(i, "f3") - 0.5 * (1.0 + std::cos(4.0 * t))) < 1e-12);
      CHECK(std::abs(f.value(i, "f12") - std::cos(2.0 * t)) < 1e-12);
    }
    const Csv traj = readCsv(s / "out/trajectory.csv");
    CHECK(traj.rows.size() == 61);
    CHECK(traj.header.front() == "t");
  }

  TEST_CASE("row count for a layered bath") {
    Scratch s("rows");
    writeText(s / "c.json", R"({"model": {"layers": [{"spins": 3, "coupling": 0.5}, {"spins": 2, "coupling": 1.0}]},
                                "time_grid": {"start": 0, "end": 2, "points": 37}})");
    REQUIRE(run("spinstar-evolve " + args(s / "c.json", s / "out"), s / "log") == 0);
    CHECK(readCsv(s / "out/f_functions.csv").rows.size() == 37);
  }

  TEST_CASE("exit code 2 on config errors") {
    Scratch s("cfgerr");
    writeText(s / "bad.json", "{\n  \"model\": {\n    \"layers\": [}\n}");
    CHECK(run("spinstar-evolve " + args(s / "bad.json", s / "out"), s / "log") == 2);
    CHECK(readText(s / "log").find("line 3") != std::string::npos);
    writeText(s / "typo.json", R"({"time_grid": {"start": 0, "end": 1, "point": 3}})");
    CHECK(run("spinstar-evolve " + args(s / "typo.json", s / "out"), s / "log") == 2);
    CHECK(readText(s / "log").find("time_grid.point") != std::string::npos);
    CHECK(run("spinstar-evolve --config " + (s / "missing.json").string(), s / "log") == 2);
    CHECK(run("no-such-command", s / "log") == 2);
  }

  TEST_CASE("exit code 3 on model errors") {
    Scratch s("modelerr");
    writeText(s / "c.json", R"({"model": {"layers": [{"spins": 13, "coupling": 1.0}], "spectrum": "brute"}})");
    CHECK(run("spinstar-evolve " + args(s / "c.json", s / "out"), s / "log") == 3);
    CHECK(readText(s / "log").find("exceeds") != std::string::npos);
  }

  TEST_CASE("spinstar-kraus writes trace-preserving sets") {
    Scratch s("kraus");
    writeText(s / "c.json", R"({"model": {"layers": [{"spins": 3, "coupling": 0.5}, {"spins": 2, "coupling": 1.0}]},
                                "time_grid": {"start": 0, "end": 3, "points": 21}})");
    REQUIRE(run("spinstar-kraus " + args(s / "c.json", s / "out"), s / "log") == 0);
    const auto doc = nlohmann::json::parse(readText(s / "out/kraus.json"));
    CHECK(doc["max_tp_residual"].get<double>() <= 1e-10);
    REQUIRE(doc["times"].size() == 21);
    for (const auto& entry : doc["times"]) CHECK(entry["tp_residual"].get<double>() <= 1e-10);
    CHECK(doc["times"][0]["operators"].size() == 1);
  }

  TEST_CASE("tcl starts at zero and stops before the first pole") {
    Scratch s("tcl");
    writeText(s / "c.json", R"({"model": {"layers": [{"spins": 1, "coupling": 1.0}]},
                                "time_grid": {"start": 0, "end": 2, "points": 41}})");
    REQUIRE(run("tcl " + args(s / "c.json", s / "out"), s / "log") == 0);
    const Csv t = readCsv(s / "out/tcl.csv");
    CHECK(t.header == std::vector<std::string>{"t", "a", "b", "gamma_plus", "gamma_z"});
    REQUIRE(!t.rows.empty());
    for (const char* col : {"a", "b", "gamma_plus", "gamma_z"}) CHECK(t.value(0, col) == 0.0);
    CHECK(t.value(t.rows.size() - 1, "t") < std::numbers::pi / 4);
    const auto poles = nlohmann::json::parse(readText(s / "out/poles.json"));
    CHECK(std::abs(poles["first_pole"].get<double>() - std::numbers::pi / 4) < 1e-10);
    CHECK(readText(s / "log").find("warning") != std::string::npos);
  }

  TEST_CASE("single-sector tcl matches the closed-form rates") {
    Scratch s("tcl1");
    const double l1 = 0.3, l2 = 1.7;
    writeText(s / "c.json", R"({"model": {"single_sector": {"lambda1": 0.3, "lambda2": 1.7}},
                                "time_grid": {"start": 0, "end": 0.5, "points": 26}})");
    REQUIRE(run("tcl " + args(s / "c.json", s / "out"), s / "log") == 0);
    const Csv t = readCsv(s / "out/tcl.csv");
    REQUIRE(t.rows.size() == 26);
    const double h1 = std::sqrt(l1), h2 = std::sqrt(l2);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const double x = t.value(i, "t");
      const double g1 = -2.0 * (h1 * std::tan(2 * h1 * x) + h2 * std::tan(2 * h2 * x));
      const double g2 = -4.0 * h1 * std::tan(4 * h1 * x);
      CHECK(std::abs(t.value(i, "a") - g1) < 1e-8 * std::max(1.0, std::abs(g1)));
      CHECK(std::abs(t.value(i, "b") - g2) < 1e-8 * std::max(1.0, std::abs(g2)));
      CHECK(std::abs(t.value(i, "gamma_plus") + g2 / 2) < 1e-8 * std::max(1.0, std::abs(g2)));
    }
  }

  TEST_CASE("nz writes Laplace and time-domain tables") {
    Scratch s("nz");
    writeText(s / "c.json", R"({"model": {"layers": [{"spins": 1, "coupling": 1.0}]},
                                "time_grid": {"start": 0, "end": 2, "points": 11},
                                "u_grid": {"start": 1, "end": 5, "points": 5}})");
    REQUIRE(run("nz " + args(s / "c.json", s / "out"), s / "log") == 0);
    const Csv lap = readCsv(s / "out/nz_laplace.csv");
    REQUIRE(lap.rows.size() == 5);
    CHECK(std::abs(lap.value(0, "nz3") + 8.0 / 9.0) < 1e-12);
    const Csv tt = readCsv(s / "out/nz_time.csv");
    REQUIRE(tt.rows.size() == 10);
    for (std::size_t i = 0; i < tt.rows.size(); ++i) {
      const double t = tt.value(i, "t");
      CHECK(std::abs(tt.value(i, "f3") - 0.5 * (1.0 + std::cos(4.0 * t))) < 1e-6);
    }
  }

  TEST_CASE("cnot report rows and determinism") {
    Scratch s("cnot");
    writeText(s / "c.json", R"({"cnot": {"c": [[0.4, 0.3, 0.2], [0.0, 0.0, 0.5], [1.0, 1.0, 1.0]],
                                         "t_grid": {"start": 0, "end": 3, "points": 7}},
                                "discord": {"polar_points": 16, "azimuth_points": 32, "starts": 4}})");
    REQUIRE(run("cnot " + args(s / "c.json", s / "a"), s / "log") == 0);
    REQUIRE(run("cnot " + args(s / "c.json", s / "b"), s / "log") == 0);
    CHECK(readText(s / "a/cnot_report.csv") == readText(s / "b/cnot_report.csv"));
    CHECK(readText(s / "a/kraus_audit.csv") == readText(s / "b/kraus_audit.csv"));
    const Csv r = readCsv(s / "a/cnot_report.csv");
    CHECK(r.header == std::vector<std::string>{"c1", "c2", "c3", "t", "discord", "choi_min_eig", "cp_verdict",
                                               "paper_kraus_residual", "valid_state"});
    REQUIRE(r.rows.size() == 21);
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      const double c1 = r.value(i, "c1"), c3 = r.value(i, "c3");
      const std::string cp = r.rows[i][r.column("cp_verdict")], valid = r.rows[i][r.column("valid_state")];
      if (c1 == 0.4) {
        CHECK(r.value(i, "discord") > 0.05);
        CHECK(cp == "true");
      } else if (c3 == 0.5) {
        CHECK(std::abs(r.value(i, "discord")) < 1e-12);
        CHECK(cp == "true");
      } else {
        CHECK(valid == "false");
        CHECK(r.rows[i][r.column("discord")] == "nan");
      }
    }
    CHECK(readText(s / "log").find("not a valid Bell-diagonal state") != std::string::npos);

    REQUIRE(run("discord " + args(s / "c.json", s / "a") + " --seed 9", s / "log") == 0);
    REQUIRE(run("discord " + args(s / "c.json", s / "b") + " --seed 9", s / "log") == 0);
    CHECK(readText(s / "a/discord.csv") == readText(s / "b/discord.csv"));
    const Csv d = readCsv(s / "a/discord.csv");
    REQUIRE(d.rows.size() == 3);
    CHECK(std::abs(d.value(0, "difference")) < 1e-6);
  }

  TEST_CASE("verify forced failure") {
    Scratch s("verify");
    writeText(s / "c.json", R"({"tolerances": {"verify": 1e-30}})");
    CHECK(run("verify --config " + (s / "c.json").string() + " --criterion 6", s / "log") == 1);
    CHECK(readText(s / "log").find("VERIFY FAILED") != std::string::npos);
    CHECK(run("verify --criterion 6", s / "log") == 0);
    CHECK(readText(s / "log").find("VERIFY OK") != std::string::npos);
  }
}
