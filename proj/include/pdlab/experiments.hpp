#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"  // vendored nlohmann/json

#include "pdlab/models.hpp"
#include "pdlab/stats.hpp"

namespace pdlab {

/// Configuration errors carry a human-readable message with the offending
/// line when it can be located; the CLI maps them to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  int schema_version = 1;
  std::string experiment;  // lln-rate | fclt-marginal | interp-bound |
                           // coupling-rate | hawkes-limit | poisson-max-bound |
                           // operator-lipschitz
  std::string model;       // telegraph | mm-infinity | mm1 | sir | moran |
                           // hawkes | poisson (experiment-dependent)
  nlohmann::json params;   // model parameters, defaults applied
  std::vector<double> n_values;
  double horizon = 1.0;
  int replications = 200;
  int grid = 1 << 12;
  std::uint64_t seed = 1;
  int workers = 1;
  std::filesystem::path out_dir;

  static ExperimentConfig from_json_file(const std::filesystem::path& file);
  static ExperimentConfig from_json(const nlohmann::json& j, const std::string& raw_text);
  nlohmann::json resolved_json() const;
};

struct ParamInfo {
  std::string name;
  std::string default_value;
  std::string doc;
};

struct CatalogEntry {
  std::string id;
  std::string summary;
  std::vector<ParamInfo> params;
};

/// The five Markov models plus the self-exciting point process.
std::vector<CatalogEntry> model_catalog();

/// Builds a model from catalog id + JSON parameters (defaults filled in).
/// Unknown ids or out-of-domain parameters throw ConfigError.
ModelSpec make_model(const std::string& id, const nlohmann::json& params);

/// Runs the experiment and writes summary.csv, manifest.json and, where a
/// rate is fitted, ratefit.json and plot.svg into out_dir. Identical
/// config+seed gives byte-identical outputs for any worker count.
void run_experiment(const ExperimentConfig& config);

/// Deterministic work distribution: calls fn(0..count-1) from a small pool;
/// exceptions are rethrown on the caller thread.
void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t)>& fn);

struct OperatorCheck {
  std::string name;
  double worst_ratio = 0.0;   // max over pairs of lhs / (C * rhs), 0/0 skipped
  double worst_excess = 0.0;  // max over pairs of lhs - C * rhs
  int violations = 0;         // pairs with lhs > C * rhs + 1e-9
  int pairs = 0;
};

/// Random-pair Lipschitz battery for the path operators; each check's
/// constant: 1 for running max, local time and time change; 2 for the
/// reflection and the continuity modulus; (1 + |A| T e^{T |A|}) for the
/// linear drift map. Also verifies the drift map's linearity.
std::vector<OperatorCheck> run_operator_battery(int pairs, std::uint64_t seed);

/// FNV-1a of the canonical config dump, as fixed-width hex.
std::string config_hash(const nlohmann::json& resolved);

std::string format_double(double v);

}  // namespace pdlab
