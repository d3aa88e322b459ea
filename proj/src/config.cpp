#include "qcf/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace qcf {

using nlohmann::json;

std::vector<double> Grid::values() const {
  std::vector<double> v(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    v[static_cast<std::size_t>(i)] = i == points - 1 ? end : start + (end - start) * i / (points - 1);
  return v;
}

Tolerances ToleranceOverrides::apply(Tolerances base) const {
  if (structural) base.structural = *structural;
  if (reconstruction) base.reconstruction = *reconstruction;
  if (pole) base.pole = *pole;
  if (krausTruncation) base.krausTruncation = *krausTruncation;
  return base;
}

BathSpectrum RunConfig::spectrum() const {
  if (model.singleSector) return singleSectorSpectrum(model.singleSector->lambda1, model.singleSector->lambda2);
  return bathSpectrum(model.layers, model.spectrum, tolerances.apply());
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config field '" + path + "': " + what);
}

void requireObject(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) fail(path.empty() ? key : path + "." + key, "unknown key");
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

long long integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long long>();
}

double positive(const json& j, const std::string& path) {
  const double v = number(j, path);
  if (!(v > 0.0)) fail(path, "expected a positive number");
  return v;
}

Grid parseGrid(const json& j, const std::string& path) {
  requireObject(j, path, {"start", "end", "points"});
  Grid g;
  if (j.contains("start")) g.start = number(j["start"], join(path, "start"));
  if (j.contains("end")) g.end = number(j["end"], join(path, "end"));
  if (j.contains("points")) {
    const long long p = integer(j["points"], join(path, "points"));
    if (p < 2 || p > 10'000'000) fail(join(path, "points"), "expected an integer >= 2");
    g.points = static_cast<int>(p);
  }
  if (!(g.end > g.start)) fail(path, "grid must be strictly increasing (end > start)");
  return g;
}

ModelConfig parseModel(const json& j, const std::string& path) {
  requireObject(j, path, {"layers", "spectrum", "single_sector"});
  ModelConfig m;
  if (j.contains("layers")) {
    const json& arr = j["layers"];
    const std::string lp = join(path, "layers");
    if (!arr.is_array() || arr.empty()) fail(lp, "expected a non-empty array");
    m.layers.layers.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string ip = lp + "[" + std::to_string(i) + "]";
      requireObject(arr[i], ip, {"spins", "coupling"});
      if (!arr[i].contains("spins") || !arr[i].contains("coupling")) fail(ip, "needs 'spins' and 'coupling'");
      const long long spins = integer(arr[i]["spins"], join(ip, "spins"));
      if (spins < 1 || spins > 1000) fail(join(ip, "spins"), "expected an integer in [1, 1000]");
      m.layers.layers.push_back({static_cast<int>(spins), number(arr[i]["coupling"], join(ip, "coupling"))});
    }
  }
  if (j.contains("spectrum")) {
    if (!j["spectrum"].is_string()) fail(join(path, "spectrum"), "expected a string");
    try {
      m.spectrum = parseSpectrumKind(j["spectrum"].get<std::string>());
    } catch (const Error& e) {
      fail(join(path, "spectrum"), e.what());
    }
  }
  if (j.contains("single_sector")) {
    const std::string sp = join(path, "single_sector");
    const json& s = j["single_sector"];
    requireObject(s, sp, {"lambda1", "lambda2"});
    SingleSector sec;
    if (s.contains("lambda1")) sec.lambda1 = number(s["lambda1"], join(sp, "lambda1"));
    if (s.contains("lambda2")) sec.lambda2 = number(s["lambda2"], join(sp, "lambda2"));
    if (sec.lambda1 < 0.0 || sec.lambda2 < 0.0) fail(sp, "eigenvalues must be non-negative");
    m.singleSector = sec;
  }
  return m;
}

std::array<double, 3> triple(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) fail(path, "expected an array of three numbers");
  return {number(j[0], path + "[0]"), number(j[1], path + "[1]"), number(j[2], path + "[2]")};
}

CnotConfig parseCnot(const json& j, const std::string& path) {
  requireObject(j, path, {"c", "t_grid"});
  CnotConfig c;
  if (j.contains("c")) {
    const json& arr = j["c"];
    if (!arr.is_array() || arr.empty()) fail(join(path, "c"), "expected a non-empty array of triples");
    c.c.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) c.c.push_back(triple(arr[i], join(path, "c") + "[" + std::to_string(i) + "]"));
  }
  if (j.contains("t_grid")) c.tGrid = parseGrid(j["t_grid"], join(path, "t_grid"));
  return c;
}

DiscordConfig parseDiscord(const json& j, const std::string& path) {
  requireObject(j, path, {"polar_points", "azimuth_points", "starts"});
  DiscordConfig d;
  auto count = [&](const char* key, int& out) {
    if (!j.contains(key)) return;
    const long long v = integer(j[key], join(path, key));
    if (v < 1 || v > 100000) fail(join(path, key), "expected a positive integer");
    out = static_cast<int>(v);
  };
  count("polar_points", d.polarPoints);
  count("azimuth_points", d.azimuthPoints);
  count("starts", d.starts);
  return d;
}

ToleranceOverrides parseTolerances(const json& j, const std::string& path) {
  requireObject(j, path, {"structural", "reconstruction", "pole", "kraus_truncation", "verify"});
  ToleranceOverrides t;
  auto opt = [&](const char* key, std::optional<double>& out) {
    if (j.contains(key)) out = positive(j[key], join(path, key));
  };
  opt("structural", t.structural);
  opt("reconstruction", t.reconstruction);
  opt("pole", t.pole);
  opt("kraus_truncation", t.krausTruncation);
  opt("verify", t.verify);
  return t;
}

json gridJson(const Grid& g) { return {{"start", g.start}, {"end", g.end}, {"points", g.points}}; }

}  // namespace

RunConfig parseConfig(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("config syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                      ": " + e.what());
  }
  requireObject(j, "", {"model", "time_grid", "u_grid", "initial_state", "cnot", "discord", "output_dir",
                        "tolerances", "seed"});
  RunConfig cfg;
  if (j.contains("model")) cfg.model = parseModel(j["model"], "model");
  if (j.contains("time_grid")) cfg.timeGrid = parseGrid(j["time_grid"], "time_grid");
  if (j.contains("u_grid")) {
    cfg.uGrid = parseGrid(j["u_grid"], "u_grid");
    if (!(cfg.uGrid.start > 0.0)) fail("u_grid.start", "Laplace variable must be positive");
  }
  if (j.contains("initial_state")) {
    cfg.initialState = triple(j["initial_state"], "initial_state");
    const auto& r = cfg.initialState;
    if (r[0] * r[0] + r[1] * r[1] + r[2] * r[2] > 1.0 + 1e-12) fail("initial_state", "Bloch vector longer than 1");
  }
  if (j.contains("cnot")) cfg.cnot = parseCnot(j["cnot"], "cnot");
  if (j.contains("discord")) cfg.discord = parseDiscord(j["discord"], "discord");
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) fail("output_dir", "expected a string");
    cfg.outputDir = j["output_dir"].get<std::string>();
  }
  if (j.contains("tolerances")) cfg.tolerances = parseTolerances(j["tolerances"], "tolerances");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail("seed", "expected a non-negative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  return cfg;
}

RunConfig loadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parseConfig(ss.str());
}

std::string serializeConfig(const RunConfig& cfg) {
  json layers = json::array();
  for (const auto& l : cfg.model.layers.layers) layers.push_back({{"spins", l.spins}, {"coupling", l.coupling}});
  json model = {{"layers", layers}, {"spectrum", toString(cfg.model.spectrum)}};
  if (cfg.model.singleSector)
    model["single_sector"] = {{"lambda1", cfg.model.singleSector->lambda1}, {"lambda2", cfg.model.singleSector->lambda2}};
  json cs = json::array();
  for (const auto& c : cfg.cnot.c) cs.push_back({c[0], c[1], c[2]});
  json tol = json::object();
  const auto& t = cfg.tolerances;
  if (t.structural) tol["structural"] = *t.structural;
  if (t.reconstruction) tol["reconstruction"] = *t.reconstruction;
  if (t.pole) tol["pole"] = *t.pole;
  if (t.krausTruncation) tol["kraus_truncation"] = *t.krausTruncation;
  if (t.verify) tol["verify"] = *t.verify;
  const json j = {
      {"model", model},
      {"time_grid", gridJson(cfg.timeGrid)},
      {"u_grid", gridJson(cfg.uGrid)},
      {"initial_state", {cfg.initialState[0], cfg.initialState[1], cfg.initialState[2]}},
      {"cnot", {{"c", cs}, {"t_grid", gridJson(cfg.cnot.tGrid)}}},
      {"discord",
       {{"polar_points", cfg.discord.polarPoints},
        {"azimuth_points", cfg.discord.azimuthPoints},
        {"starts", cfg.discord.starts}}},
      {"output_dir", cfg.outputDir},
      {"tolerances", tol},
      {"seed", cfg.seed},
  };
  return j.dump(2) + "\n";
}

}  // namespace qcf
