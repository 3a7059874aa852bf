#include "maxent/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "maxent/error.hpp"
#include "maxent/grid_oracle.hpp"
#include "maxent/numeric.hpp"
#include "maxent/rng.hpp"
#include "maxent/sampling.hpp"

namespace maxent {

namespace {

using nlohmann::json;

// Demo estimator settings. Histograms are used because their per-bin
// reconstruction is self-normalizing, which is what keeps the constraint
// checks and the entropy comparison stable at demo scale. The quadrature
// f-binning for the triangular entropy cross-check matches the estimator.
constexpr int kTriangularDemoBins = 128;
constexpr int kNeutrinoDemoBins = 48;
constexpr int kDensityTableBins = 64;
constexpr int kMarginalTableBins = 50;

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key))
      throw ConfigError("unknown config key \"" + path + key + "\"");
  }
}

const json& require_key(const json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError("missing config key \"" + path + key + "\"");
  return *it;
}

double as_double(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError("config key \"" + path + "\" must be a number");
  return v.get<double>();
}

std::int64_t as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer())
    throw ConfigError("config key \"" + path + "\" must be an integer");
  return v.get<std::int64_t>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError("config key \"" + path + "\" must be a string");
  return v.get<std::string>();
}

std::vector<double> as_double_array(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError("config key \"" + path + "\" must be an array");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(as_double(e, path + "[]"));
  return out;
}

BaseDistributionSpec parse_base(const json& j) {
  if (!j.is_object()) throw ConfigError("config key \"base\" must be an object");
  check_keys(j, {"family", "dimension", "lo", "hi", "mean", "sigma"}, "base.");
  BaseDistributionSpec spec;
  const std::string family = as_string(require_key(j, "family", "base."), "base.family");
  if (family == "uniform_box") spec.family = BaseFamily::UniformBox;
  else if (family == "independent_gaussian") spec.family = BaseFamily::IndependentGaussian;
  else if (family == "gaussian_on_log") spec.family = BaseFamily::GaussianOnLog;
  else throw ConfigError("base.family must be uniform_box, independent_gaussian, or gaussian_on_log");
  spec.dimension = static_cast<int>(as_int(require_key(j, "dimension", "base."), "base.dimension"));
  if (spec.family == BaseFamily::UniformBox) {
    spec.lo = as_double_array(require_key(j, "lo", "base."), "base.lo");
    spec.hi = as_double_array(require_key(j, "hi", "base."), "base.hi");
    if (j.contains("mean") || j.contains("sigma"))
      throw ConfigError("base.mean/base.sigma are not valid for uniform_box");
  } else {
    spec.mean = as_double_array(require_key(j, "mean", "base."), "base.mean");
    spec.sigma = as_double_array(require_key(j, "sigma", "base."), "base.sigma");
    if (j.contains("lo") || j.contains("hi"))
      throw ConfigError("base.lo/base.hi are only valid for uniform_box");
  }
  spec.validate();
  return spec;
}

TargetSpec parse_target(const json& j) {
  if (!j.is_object()) throw ConfigError("config key \"target\" must be an object");
  check_keys(j, {"family", "lo", "hi", "mean", "sigma"}, "target.");
  TargetSpec spec;
  const std::string family = as_string(require_key(j, "family", "target."), "target.family");
  if (family == "uniform_interval") spec.family = TargetFamily::UniformInterval;
  else if (family == "gaussian") spec.family = TargetFamily::Gaussian;
  else if (family == "gaussian_on_log") spec.family = TargetFamily::GaussianOnLog;
  else throw ConfigError("target.family must be uniform_interval, gaussian, or gaussian_on_log");
  if (spec.family == TargetFamily::UniformInterval) {
    spec.lo = as_double(require_key(j, "lo", "target."), "target.lo");
    spec.hi = as_double(require_key(j, "hi", "target."), "target.hi");
    if (j.contains("mean") || j.contains("sigma"))
      throw ConfigError("target.mean/target.sigma are not valid for uniform_interval");
  } else {
    spec.mean = as_double(require_key(j, "mean", "target."), "target.mean");
    spec.sigma = as_double(require_key(j, "sigma", "target."), "target.sigma");
    if (j.contains("lo") || j.contains("hi"))
      throw ConfigError("target.lo/target.hi are only valid for uniform_interval");
  }
  spec.validate();
  return spec;
}

EstimatorConfig parse_estimator(const json& j) {
  if (!j.is_object()) throw ConfigError("config key \"estimator\" must be an object");
  check_keys(j, {"kind", "bins", "bandwidth"}, "estimator.");
  EstimatorConfig est;
  const std::string kind = as_string(require_key(j, "kind", "estimator."), "estimator.kind");
  if (kind == "histogram") est.kind = EstimatorKind::Histogram;
  else if (kind == "kde") est.kind = EstimatorKind::Kde;
  else throw ConfigError("estimator.kind must be histogram or kde");
  if (j.contains("bins"))
    est.bins = static_cast<int>(as_int(j.at("bins"), "estimator.bins"));
  if (j.contains("bandwidth"))
    est.bandwidth = as_double(j.at("bandwidth"), "estimator.bandwidth");
  return est;
}

DiagnosticsConfig parse_diagnostics(const json& j) {
  if (!j.is_object()) throw ConfigError("config key \"diagnostics\" must be an object");
  check_keys(j, {"ks", "marginals", "perturbation"}, "diagnostics.");
  DiagnosticsConfig d;
  if (j.contains("ks")) {
    if (!j.at("ks").is_boolean())
      throw ConfigError("config key \"diagnostics.ks\" must be a boolean");
    d.ks = j.at("ks").get<bool>();
  }
  if (j.contains("marginals")) {
    if (!j.at("marginals").is_array())
      throw ConfigError("config key \"diagnostics.marginals\" must be an array");
    for (const auto& e : j.at("marginals"))
      d.marginals.push_back(static_cast<int>(as_int(e, "diagnostics.marginals[]")));
  }
  if (j.contains("perturbation")) {
    const json& p = j.at("perturbation");
    if (!p.is_object())
      throw ConfigError("config key \"diagnostics.perturbation\" must be an object");
    check_keys(p, {"s", "deltas"}, "diagnostics.perturbation.");
    PerturbationConfig pc;
    pc.s = as_string(require_key(p, "s", "diagnostics.perturbation."),
                     "diagnostics.perturbation.s");
    pc.deltas = as_double_array(require_key(p, "deltas", "diagnostics.perturbation."),
                                "diagnostics.perturbation.deltas");
    d.perturbation = std::move(pc);
  }
  return d;
}

std::string family_name(BaseFamily f) {
  switch (f) {
    case BaseFamily::UniformBox: return "uniform_box";
    case BaseFamily::IndependentGaussian: return "independent_gaussian";
    case BaseFamily::GaussianOnLog: return "gaussian_on_log";
  }
  return {};
}

std::string family_name(TargetFamily f) {
  switch (f) {
    case TargetFamily::UniformInterval: return "uniform_interval";
    case TargetFamily::Gaussian: return "gaussian";
    case TargetFamily::GaussianOnLog: return "gaussian_on_log";
  }
  return {};
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("failed writing " + path.string());
}

void write_weighted_samples(const std::filesystem::path& path,
                            const WeightedEnsemble& ens) {
  std::string buf;
  buf.reserve(1 << 20);
  for (int k = 1; k <= ens.samples.dim; ++k) {
    buf += "x" + std::to_string(k) + ",";
  }
  buf += "f,w_raw,w_norm\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  for (std::int64_t i = 0; i < ens.samples.n; ++i) {
    const auto row = ens.samples.row(i);
    for (double v : row) {
      buf += format_double(v);
      buf += ',';
    }
    buf += format_double(ens.f_values[static_cast<std::size_t>(i)]);
    buf += ',';
    buf += format_double(ens.w_raw[static_cast<std::size_t>(i)]);
    buf += ',';
    buf += format_double(ens.w_norm[static_cast<std::size_t>(i)]);
    buf += '\n';
    if (buf.size() > (1 << 20) - 256) {
      out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
      buf.clear();
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error("failed writing " + path.string());
}

void write_density_table(const std::filesystem::path& path, const DensityTable& induced,
                         const DensityTable& reweighted, const TargetSpec& target) {
  std::string buf = "f,induced_pdf,target_pdf,reweighted_pdf\n";
  for (int b = 0; b < induced.bins(); ++b) {
    const double c = induced.center(b);
    buf += format_double(c);
    buf += ',';
    buf += format_double(induced.density[b]);
    buf += ',';
    buf += format_double(target_pdf(target, c));
    buf += ',';
    buf += format_double(reweighted.density[b]);
    buf += '\n';
  }
  write_file(path, buf);
}

json table_to_json(const DensityTable& t) {
  json centers = json::array(), density = json::array();
  for (int b = 0; b < t.bins(); ++b) {
    centers.push_back(t.center(b));
    density.push_back(t.density[b]);
  }
  return json{{"lo", t.lo}, {"hi", t.hi}, {"width", t.width},
              {"bin_center", centers}, {"density", density}};
}

}  // namespace

void RunConfig::validate() const {
  base.validate();
  target.validate();
  if (n_samples < 1000) throw ConfigError("n_samples must be >= 1000");
  if (derived.empty()) throw ConfigError("derived expression must be nonempty");
  parse(derived, base.dimension);  // throws with position on bad expressions
  if (estimator.bins && *estimator.bins < 2)
    throw ConfigError("estimator.bins must be >= 2");
  if (estimator.bandwidth && !(*estimator.bandwidth > 0.0))
    throw ConfigError("estimator.bandwidth must be > 0");
  for (int k : diagnostics.marginals)
    if (k < 1 || k > base.dimension)
      throw ConfigError("diagnostics.marginals entries must lie in [1, dimension]");
  if (diagnostics.perturbation) {
    parse(diagnostics.perturbation->s, base.dimension);
    for (double d : diagnostics.perturbation->deltas)
      if (!(std::fabs(d) < 1.0))
        throw ConfigError("diagnostics.perturbation.deltas must satisfy |delta| < 1");
  }
  if (output_dir.empty()) throw ConfigError("output_dir must be nonempty");
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config root must be an object");
  check_keys(j,
             {"base", "derived", "target", "n_samples", "seed", "estimator",
              "output_dir", "diagnostics"},
             "");
  RunConfig cfg;
  cfg.base = parse_base(require_key(j, "base", ""));
  cfg.derived = as_string(require_key(j, "derived", ""), "derived");
  cfg.target = parse_target(require_key(j, "target", ""));
  cfg.n_samples = as_int(require_key(j, "n_samples", ""), "n_samples");
  cfg.seed = static_cast<std::uint64_t>(as_int(require_key(j, "seed", ""), "seed"));
  if (j.contains("estimator")) cfg.estimator = parse_estimator(j.at("estimator"));
  if (j.contains("output_dir"))
    cfg.output_dir = as_string(j.at("output_dir"), "output_dir");
  if (j.contains("diagnostics")) cfg.diagnostics = parse_diagnostics(j.at("diagnostics"));
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config file " + file.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& err) {
    throw ConfigError("config file " + file.string() + ": " + err.what());
  }
  return parse_config(j);
}

nlohmann::json resolved_config_json(const RunConfig& cfg) {
  json base{{"family", family_name(cfg.base.family)}, {"dimension", cfg.base.dimension}};
  if (cfg.base.family == BaseFamily::UniformBox) {
    base["lo"] = cfg.base.lo;
    base["hi"] = cfg.base.hi;
  } else {
    base["mean"] = cfg.base.mean;
    base["sigma"] = cfg.base.sigma;
  }
  json target{{"family", family_name(cfg.target.family)}};
  if (cfg.target.family == TargetFamily::UniformInterval) {
    target["lo"] = cfg.target.lo;
    target["hi"] = cfg.target.hi;
  } else {
    target["mean"] = cfg.target.mean;
    target["sigma"] = cfg.target.sigma;
  }
  json estimator{{"kind", cfg.estimator.kind == EstimatorKind::Histogram ? "histogram" : "kde"}};
  if (cfg.estimator.bins) estimator["bins"] = *cfg.estimator.bins;
  if (cfg.estimator.bandwidth) estimator["bandwidth"] = *cfg.estimator.bandwidth;
  json diagnostics{{"ks", cfg.diagnostics.ks}, {"marginals", cfg.diagnostics.marginals}};
  if (cfg.diagnostics.perturbation) {
    diagnostics["perturbation"] = json{{"s", cfg.diagnostics.perturbation->s},
                                       {"deltas", cfg.diagnostics.perturbation->deltas}};
  }
  return json{{"base", base},
              {"derived", cfg.derived},
              {"target", target},
              {"n_samples", cfg.n_samples},
              {"seed", cfg.seed},
              {"estimator", estimator},
              {"output_dir", cfg.output_dir.string()},
              {"diagnostics", diagnostics}};
}

double ks_threshold_for_ess(double ess) { return 3.0 * 1.63 / std::sqrt(ess); }

RunResult run_transform(const RunConfig& cfg, int threads) {
  cfg.validate();
  const DerivedExpr expr = parse(cfg.derived, cfg.base.dimension);

  SampleBatch batch = sample_base(cfg.base, cfg.n_samples, cfg.seed, threads);
  std::vector<double> f = derived_values(batch, expr, threads);

  DensityEstimate est = (cfg.estimator.kind == EstimatorKind::Histogram)
                            ? fit_histogram(f, cfg.estimator.bins)
                            : fit_kde(f, cfg.estimator.bandwidth);

  RawWeights raw = compute_raw_weights(f, est, cfg.target, threads);
  std::vector<double> w_norm = normalize_weights(raw.weights);

  RunResult result;
  result.reweight = make_reweight_report(raw, est);

  DiagnosticReport& diag = result.diagnostics;
  diag.ks_enabled = cfg.diagnostics.ks;
  if (diag.ks_enabled) {
    diag.ks_statistic = weighted_ks(f, w_norm, cfg.target);
    diag.ks_threshold = ks_threshold_for_ess(result.reweight.ess);
    diag.passed = diag.ks_statistic <= diag.ks_threshold;
  }

  // Density table over the union of the target support and the data range.
  {
    const double lo = std::min(cfg.target.support_lo(), est.lo);
    const double hi = std::max(cfg.target.support_hi(), est.hi);
    diag.weighted_hist = weighted_histogram(f, w_norm, kDensityTableBins, lo, hi);
    std::vector<double> uniform(f.size(), 1.0 / static_cast<double>(f.size()));
    diag.induced_hist = weighted_histogram(f, uniform, kDensityTableBins, lo, hi);
  }

  for (int k : cfg.diagnostics.marginals) {
    double lo, hi;
    if (cfg.base.family == BaseFamily::UniformBox) {
      lo = cfg.base.lo[k - 1];
      hi = cfg.base.hi[k - 1];
    } else {
      double vmin = batch.points.data[k - 1], vmax = vmin;
      for (std::int64_t i = 0; i < batch.points.n; ++i) {
        const double v = batch.points.data[static_cast<std::size_t>(i) * batch.points.dim + (k - 1)];
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
      }
      lo = vmin;
      hi = vmax;
    }
    diag.marginal_dims.push_back(k);
    diag.marginals.push_back(
        weighted_marginal(batch.points, w_norm, k, kMarginalTableBins, lo, hi));
  }

  result.ensemble = WeightedEnsemble{std::move(batch.points), std::move(f),
                                     std::move(raw.weights), std::move(w_norm),
                                     raw.clipped_count, cfg.seed};

  if (cfg.diagnostics.perturbation) {
    const DerivedExpr s = parse(cfg.diagnostics.perturbation->s, cfg.base.dimension);
    PerturbationResult pr = perturbation_entropy_test(
        result.ensemble, s, cfg.diagnostics.perturbation->deltas);
    diag.perturbation_entropies = std::move(pr.entropies);
    for (auto& w : pr.warnings) diag.warnings.push_back(std::move(w));
  }

  // Artifacts.
  std::filesystem::create_directories(cfg.output_dir);
  write_weighted_samples(cfg.output_dir / "weighted_samples.csv", result.ensemble);
  write_density_table(cfg.output_dir / "density_table.csv", diag.induced_hist,
                      diag.weighted_hist, cfg.target);

  json report{{"n", result.reweight.n},
              {"ess", result.reweight.ess},
              {"entropy", result.reweight.entropy},
              {"normalization_mc", result.reweight.normalization_mc},
              {"clipped_fraction", result.reweight.clipped_fraction},
              {"ks_statistic", diag.ks_statistic},
              {"ks_threshold", diag.ks_threshold},
              {"passed", diag.passed},
              {"estimator_summary", result.reweight.estimator_summary},
              {"rng_algorithm", kRngAlgorithm},
              {"resolved_config", resolved_config_json(cfg)}};
  json warnings = json::array();
  for (const auto& w : result.reweight.warnings) warnings.push_back(w);
  for (const auto& w : diag.warnings) warnings.push_back(w);
  report["warnings"] = warnings;
  if (!diag.perturbation_entropies.empty()) {
    json pert = json::array();
    for (const auto& [delta, entropy] : diag.perturbation_entropies)
      pert.push_back(json{{"delta", delta}, {"entropy", entropy}});
    report["perturbation_entropies"] = pert;
  }
  if (!diag.marginals.empty()) {
    json marg = json::array();
    for (std::size_t i = 0; i < diag.marginals.size(); ++i) {
      json m = table_to_json(diag.marginals[i]);
      m["dimension"] = diag.marginal_dims[i];
      marg.push_back(m);
    }
    report["marginal_tables"] = marg;
  }
  write_file(cfg.output_dir / "report.json", report.dump(2) + "\n");

  result.report = std::move(report);
  result.output_dir = cfg.output_dir;
  return result;
}

DemoName demo_from_string(const std::string& name) {
  if (name == "triangular") return DemoName::Triangular;
  if (name == "neutrino") return DemoName::Neutrino;
  throw ConfigError("unknown demo \"" + name + "\" (expected triangular or neutrino)");
}

RunConfig demo_config(DemoName name) {
  RunConfig cfg;
  switch (name) {
    case DemoName::Triangular: {
      cfg.base.family = BaseFamily::UniformBox;
      cfg.base.dimension = 2;
      cfg.base.lo = {0.0, 0.0};
      cfg.base.hi = {1.0, 1.0};
      cfg.derived = "x1 + x2";
      cfg.target.family = TargetFamily::UniformInterval;
      cfg.target.lo = 0.0;
      cfg.target.hi = 2.0;
      cfg.n_samples = 1000000;
      cfg.seed = 20190101;
      cfg.estimator.kind = EstimatorKind::Histogram;
      cfg.estimator.bins = kTriangularDemoBins;
      cfg.output_dir = "demo_triangular";
      cfg.diagnostics.ks = true;
      cfg.diagnostics.marginals = {1, 2};
      cfg.diagnostics.perturbation =
          PerturbationConfig{"sign(x1 - x2)", {0.0, 0.2, 0.5, 0.9}};
      break;
    }
    case DemoName::Neutrino: {
      cfg.base.family = BaseFamily::IndependentGaussian;
      cfg.base.dimension = 3;
      cfg.base.mean = {0.0, 0.0, 0.0};
      cfg.base.sigma = {5.0, 5.0, 5.0};
      cfg.derived = "log(mean(exp(x)))";
      cfg.target.family = TargetFamily::Gaussian;
      cfg.target.mean = 0.0;
      cfg.target.sigma = 5.0;
      cfg.n_samples = 1000000;
      cfg.seed = 20190102;
      cfg.estimator.kind = EstimatorKind::Histogram;
      cfg.estimator.bins = kNeutrinoDemoBins;
      cfg.output_dir = "demo_neutrino";
      cfg.diagnostics.ks = true;
      cfg.diagnostics.marginals = {1, 2, 3};
      break;
    }
  }
  return cfg;
}

DensityTable run_oracle(const RunConfig& cfg, const OracleOptions& options) {
  cfg.base.validate();
  if (cfg.base.dimension > 3)
    throw ConfigError("oracle runs support at most 3 dimensions");
  const DerivedExpr expr = parse(cfg.derived, cfg.base.dimension);

  int points = options.grid_points;
  if (points <= 0) points = (cfg.base.dimension <= 2) ? 512 : 64;
  const GridSpec grid = GridSpec::regular(cfg.base, points);

  DensityTable induced = induced_density_grid(cfg.base, expr, grid, options.f_bins);

  std::filesystem::create_directories(cfg.output_dir);
  std::string buf = "f,induced_pdf,target_pdf,reweighted_pdf\n";
  // The reweighted column is the target restricted to the induced support,
  // renormalized over it; with full overlap it is just the target.
  KahanSum covered;
  for (int b = 0; b < induced.bins(); ++b) {
    if (induced.density[b] > 0.0)
      covered.add(target_pdf(cfg.target, induced.center(b)) * induced.width);
  }
  const double z = covered.value();
  for (int b = 0; b < induced.bins(); ++b) {
    const double c = induced.center(b);
    const double r = target_pdf(cfg.target, c);
    const double rw = (z > 0.0 && induced.density[b] > 0.0) ? r / z : 0.0;
    buf += format_double(c);
    buf += ',';
    buf += format_double(induced.density[b]);
    buf += ',';
    buf += format_double(options.with_target ? r : 0.0);
    buf += ',';
    buf += format_double(options.with_target ? rw : 0.0);
    buf += '\n';
  }
  write_file(cfg.output_dir / "density_table.csv", buf);
  return induced;
}

}  // namespace maxent
