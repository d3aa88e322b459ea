#pragma once

#include "qcf/spin_star.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qcf {

/// Evenly spaced grid start, ..., end with `points` entries.
struct Grid {
  double start = 0.0;
  double end = 1.0;
  int points = 2;

  std::vector<double> values() const;
  bool operator==(const Grid&) const = default;
};

struct ToleranceOverrides {
  std::optional<double> structural;
  std::optional<double> reconstruction;
  std::optional<double> pole;
  std::optional<double> krausTruncation;
  std::optional<double> verify;  // replaces every threshold of the verify suite
  bool operator==(const ToleranceOverrides&) const = default;

  Tolerances apply(Tolerances base = defaultTolerances()) const;
};

struct SingleSector {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  bool operator==(const SingleSector&) const = default;
};

struct ModelConfig {
  LayerConfig layers{{{1, 1.0}}};
  SpectrumKind spectrum = SpectrumKind::Auto;
  std::optional<SingleSector> singleSector;  // replaces the layered bath when set
  bool operator==(const ModelConfig&) const = default;
};

struct CnotConfig {
  std::vector<std::array<double, 3>> c{{0.4, 0.3, 0.2}, {0.0, 0.0, 0.5}};
  Grid tGrid{0.0, 3.0, 31};
  bool operator==(const CnotConfig&) const = default;
};

struct DiscordConfig {
  int polarPoints = 64;
  int azimuthPoints = 128;
  int starts = 8;
  bool operator==(const DiscordConfig&) const = default;
};

struct RunConfig {
  ModelConfig model;
  Grid timeGrid{0.0, 3.0, 200};
  Grid uGrid{0.5, 5.0, 10};
  std::array<double, 3> initialState{0.0, 0.0, 1.0};  // physical Bloch vector
  CnotConfig cnot;
  DiscordConfig discord;
  std::string outputDir = ".";
  ToleranceOverrides tolerances;
  std::uint64_t seed = 42;
  bool operator==(const RunConfig&) const = default;

  BathSpectrum spectrum() const;
};

/// Parse failure: message names the line (syntax errors) or the field path.
class ConfigError : public Error {
 public:
  using Error::Error;
};

RunConfig parseConfig(const std::string& text);
RunConfig loadConfig(const std::string& path);
std::string serializeConfig(const RunConfig& cfg);

}  // namespace qcf
