#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "maxent/error.hpp"
#include "maxent/numeric.hpp"
#include "maxent/pipeline.hpp"

namespace {

struct Overrides {
  std::optional<std::string> out_dir;
  std::optional<std::int64_t> seed;
  std::optional<std::int64_t> n_samples;
  std::optional<std::string> estimator;
  int threads = 1;
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--out-dir", ov.out_dir, "Output directory (overrides config)");
  cmd->add_option("--seed", ov.seed, "RNG seed (overrides config)");
  cmd->add_option("--n-samples", ov.n_samples, "Sample count (overrides config)");
  cmd->add_option("--estimator", ov.estimator,
                  "Induced-density estimator: histogram or kde (overrides config)")
      ->check(CLI::IsMember({"histogram", "kde"}));
  cmd->add_option("--threads", ov.threads, "Worker cap; results do not depend on it")
      ->check(CLI::PositiveNumber);
}

void apply_overrides(maxent::RunConfig& cfg, const Overrides& ov) {
  if (ov.out_dir) cfg.output_dir = *ov.out_dir;
  if (ov.seed) cfg.seed = static_cast<std::uint64_t>(*ov.seed);
  if (ov.n_samples) cfg.n_samples = *ov.n_samples;
  if (ov.estimator) {
    const auto kind = (*ov.estimator == "histogram") ? maxent::EstimatorKind::Histogram
                                                     : maxent::EstimatorKind::Kde;
    if (kind != cfg.estimator.kind) {
      cfg.estimator.kind = kind;
      cfg.estimator.bins.reset();
      cfg.estimator.bandwidth.reset();
    }
  }
}

int finish_run(const maxent::RunResult& result) {
  const auto& rw = result.reweight;
  std::cout << "n                 " << rw.n << "\n"
            << "ess               " << maxent::format_double_shortest(rw.ess) << "\n"
            << "entropy           " << maxent::format_double_shortest(rw.entropy) << "\n"
            << "normalization_mc  " << maxent::format_double_shortest(rw.normalization_mc)
            << "\n"
            << "clipped_fraction  "
            << maxent::format_double_shortest(rw.clipped_fraction) << "\n";
  if (result.diagnostics.ks_enabled) {
    std::cout << "ks_statistic      "
              << maxent::format_double_shortest(result.diagnostics.ks_statistic)
              << " (threshold "
              << maxent::format_double_shortest(result.diagnostics.ks_threshold) << ")\n";
  }
  for (const auto& w : rw.warnings) std::cout << "WARNING: " << w << "\n";
  for (const auto& w : result.diagnostics.warnings) std::cout << "WARNING: " << w << "\n";
  std::cout << "artifacts in      " << result.output_dir.string() << "\n";
  if (!result.passed()) {
    std::cout << "diagnostics FAILED\n";
    return 2;
  }
  std::cout << "diagnostics passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transforms a base distribution so a derived parameter follows a target "
               "distribution, by maximum-entropy importance reweighting"};
  app.require_subcommand(1);

  std::string config_path;
  std::string demo_name;
  Overrides ov;

  auto* transform = app.add_subcommand("transform", "Run the pipeline from a JSON config");
  transform->add_option("--config", config_path, "Config file")->required();
  add_override_flags(transform, ov);

  auto* demo = app.add_subcommand("demo", "Run a built-in demo (triangular | neutrino)");
  demo->add_option("name", demo_name, "Demo name")->required();
  add_override_flags(demo, ov);

  auto* oracle = app.add_subcommand(
      "oracle", "Grid-quadrature induced density for the config (dimension <= 3)");
  oracle->add_option("--config", config_path, "Config file")->required();
  maxent::OracleOptions oracle_options;
  oracle->add_option("--grid-points", oracle_options.grid_points,
                     "Grid points per dimension (default 512, or 64 in 3-D)");
  oracle->add_option("--f-bins", oracle_options.f_bins, "Bins for the induced density")
      ->check(CLI::PositiveNumber);
  std::optional<std::string> oracle_out;
  oracle->add_option("--out-dir", oracle_out, "Output directory (overrides config)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (transform->parsed()) {
      maxent::RunConfig cfg = maxent::load_config(config_path);
      apply_overrides(cfg, ov);
      return finish_run(maxent::run_transform(cfg, ov.threads));
    }
    if (demo->parsed()) {
      maxent::RunConfig cfg = maxent::demo_config(maxent::demo_from_string(demo_name));
      apply_overrides(cfg, ov);
      return finish_run(maxent::run_transform(cfg, ov.threads));
    }
    if (oracle->parsed()) {
      maxent::RunConfig cfg = maxent::load_config(config_path);
      if (oracle_out) cfg.output_dir = *oracle_out;
      maxent::run_oracle(cfg, oracle_options);
      std::cout << "oracle density table in " << cfg.output_dir.string() << "\n";
      return 0;
    }
  } catch (const maxent::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 1;
}
