#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "maxent/expr.hpp"
#include "maxent/model.hpp"

namespace maxent {

/// Uniform-bin density table (bin centers implied by lo/hi/width).
struct DensityTable {
  double lo = 0.0;
  double hi = 1.0;
  double width = 1.0;
  std::vector<double> density;

  int bins() const { return static_cast<int>(density.size()); }
  double center(int b) const { return lo + (static_cast<double>(b) + 0.5) * width; }
};

/// Two-sided Kolmogorov-Smirnov distance between the weight-cumulative
/// step function of f and the target CDF, evaluated at both sides of every
/// step. Throws on empty input.
double weighted_ks(std::span<const double> f_values, std::span<const double> w_norm,
                   const TargetSpec& target);

/// Weighted histogram density over [lo, hi]; integrates to the in-range
/// weight mass. Samples outside the range are dropped.
DensityTable weighted_histogram(std::span<const double> f_values,
                                std::span<const double> w_norm, int bins, double lo,
                                double hi);

/// Weighted marginal density of component `dimension_index` (1-based).
DensityTable weighted_marginal(const SampleMatrix& samples,
                               std::span<const double> w_norm, int dimension_index,
                               int bins, double lo, double hi);

struct PerturbationResult {
  /// (delta, entropy of weights w_i * (1 + delta * s(x_i)) after
  /// renormalization), in input order.
  std::vector<std::pair<double, double>> entropies;
  std::vector<std::string> warnings;
};

/// Entropy response to constraint-preserving perturbations. The direction
/// s must evaluate within [-1, 1] on the samples and should have zero
/// weighted mean on every level set of f; the per-bin level-set means are
/// checked and a warning is recorded where |mean| exceeds 0.05. Requires
/// |delta| < 1.
PerturbationResult perturbation_entropy_test(const WeightedEnsemble& ensemble,
                                             const DerivedExpr& s,
                                             std::span<const double> deltas);

/// Triangular density of the sum of two unit uniforms: f on [0,1], 2-f on
/// [1,2], zero elsewhere.
double triangular_oracle_pdf(double f);

/// Marginal of one coordinate after flattening that sum: -log(a(1-a))/2 on
/// (0,1). Throws at the endpoints (logarithmic divergence).
double triangular_oracle_marginal(double a);

struct DiagnosticReport {
  bool ks_enabled = false;
  double ks_statistic = 0.0;
  double ks_threshold = 0.0;
  DensityTable weighted_hist;
  DensityTable induced_hist;  // unweighted, same grid
  std::vector<int> marginal_dims;
  std::vector<DensityTable> marginals;
  std::vector<std::pair<double, double>> perturbation_entropies;
  std::vector<std::string> warnings;
  bool passed = true;
};

}  // namespace maxent
