#pragma once

#include "infogeo/core.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace infogeo::cli {

/// Schema violation; the message starts with the offending key path.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct ModelSection {
  std::string name = "linear";
  std::map<std::string, double> params{{"F", -1.0}, {"sigma", 1.0}, {"H", 1.0}};
  bool operator==(const ModelSection&) const = default;
};

struct MeasureSection {
  double t = 1.0;
  std::string variant = "smooth";
  bool operator==(const MeasureSection&) const = default;
};

struct GridSection {
  double L = 10.0;
  int n = 801;
  bool operator==(const GridSection&) const = default;
};

struct SpaceSection {
  std::string kind = "Hk";
  int k = 2;
  double lambda0 = 2.0;
  double lambda1 = 2.0;
  bool operator==(const SpaceSection&) const = default;
};

struct BasisSection {
  std::string name = "poly_plus_bump";
  int m = 2;
  bool operator==(const BasisSection&) const = default;
};

/// dt: projection filter step; dt_dense: dense solver step; dt_sim: path
/// simulation step; out_dt: output spacing.
struct TimeSection {
  double T = 1.0;
  double dt = 1e-3;
  double dt_sim = 1e-4;
  double dt_dense = 1e-4;
  double out_dt = 1e-2;
  bool operator==(const TimeSection&) const = default;
};

struct PriorSection {
  double mean = 0.0;
  double var = 1.0;
  std::string dense_init = "projected";  ///< "projected" | "exact"
  bool operator==(const PriorSection&) const = default;
};

struct DensitySection {
  std::string kind = "gaussian";
  double mean = 0.0;
  double scale = 1.0;
  double value = 1.0;
  bool operator==(const DensitySection&) const = default;
};

struct GeometrySection {
  std::vector<DensitySection> densities;
  double step = 1e-3;  ///< Eguchi finite-difference step
  bool operator==(const GeometrySection&) const = default;
};

struct CounterexampleSection {
  int k = 2;
  double lambda = 2.0;
  double t = 1.0;
  std::string variant = "simple";
  int m = 2;
  int terms = 30;
  double zeta1 = -1.0;
  double zeta2 = -0.1;
  int nodes = 401;
  std::optional<int> alpha_order;
  bool operator==(const CounterexampleSection&) const = default;
};

struct RunConfig {
  std::string version = "1";
  std::string family = "balanced";
  ModelSection model;
  MeasureSection measure;
  GridSection grid;
  SpaceSection space;
  BasisSection basis;
  TimeSection time;
  PriorSection prior;
  GeometrySection geometry;
  CounterexampleSection counterexample;
  bool operator==(const RunConfig&) const = default;
};

/// Strict parse: unknown keys, wrong types and out-of-range values throw
/// ConfigError naming the key path. Missing keys keep their defaults.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& cfg);

}  // namespace infogeo::cli
