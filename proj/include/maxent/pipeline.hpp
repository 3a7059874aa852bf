#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "maxent/diagnostics.hpp"
#include "maxent/model.hpp"
#include "maxent/reweight.hpp"

namespace maxent {

struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::Histogram;
  std::optional<int> bins;
  std::optional<double> bandwidth;
};

struct PerturbationConfig {
  std::string s;
  std::vector<double> deltas;
};

struct DiagnosticsConfig {
  bool ks = true;
  std::vector<int> marginals;
  std::optional<PerturbationConfig> perturbation;
};

struct RunConfig {
  BaseDistributionSpec base;
  std::string derived;
  TargetSpec target;
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
  EstimatorConfig estimator;
  std::filesystem::path output_dir = "maxent_out";
  DiagnosticsConfig diagnostics;

  void validate() const;
};

/// Parses a config object, rejecting unknown keys. Error messages carry
/// dotted field paths.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& file);
nlohmann::json resolved_config_json(const RunConfig& config);

struct RunResult {
  WeightedEnsemble ensemble;
  ReweightReport reweight;
  DiagnosticReport diagnostics;
  nlohmann::json report;
  std::filesystem::path output_dir;

  bool passed() const { return diagnostics.passed; }
};

/// Full pipeline: sample, derive, fit, reweight, diagnose, write
/// weighted_samples.csv, density_table.csv and report.json.
RunResult run_transform(const RunConfig& config, int threads = 1);

enum class DemoName { Triangular, Neutrino };

/// Built-in demo configuration. Overrides from the command line are applied
/// by the caller before running.
RunConfig demo_config(DemoName name);
DemoName demo_from_string(const std::string& name);

struct OracleOptions {
  int grid_points = 0;  // 0: 512 for dimension <= 2, 64 for dimension 3
  int f_bins = 256;
  bool with_target = true;
};

/// Grid-oracle run over the same config schema; writes density_table.csv
/// into the output directory and returns the induced table.
DensityTable run_oracle(const RunConfig& config, const OracleOptions& options);

/// The KS pass threshold used in reports: 3 * 1.63 / sqrt(ess).
double ks_threshold_for_ess(double ess);

}  // namespace maxent
