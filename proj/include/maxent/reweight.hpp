#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "maxent/density.hpp"
#include "maxent/model.hpp"

namespace maxent {

struct RawWeights {
  std::vector<double> weights;
  std::int64_t clipped_count = 0;
};

/// Importance weights w_i = r(f_i) / P(f_i), where P is the estimated
/// induced density. Where the target has mass but the estimate reads zero
/// (below its floor) the weight is clipped to 0 and counted; where the
/// target itself is zero the weight is 0 without counting. Throws if every
/// weight comes out zero ("target support disjoint from induced support").
RawWeights compute_raw_weights(std::span<const double> f_values,
                               const DensityEstimate& est, const TargetSpec& target,
                               int threads = 1);

/// Same, with the target density taken from another (or the same) fitted
/// estimate. Passing the estimate itself yields weights that are exactly 1.
RawWeights compute_raw_weights(std::span<const double> f_values,
                               const DensityEstimate& est,
                               const DensityEstimate& target_density, int threads = 1);

/// w_norm_i = w_i / sum(w). Throws on all-zero input.
std::vector<double> normalize_weights(std::span<const double> w_raw);

/// Kish effective sample size (sum w)^2 / sum(w^2); scale-invariant, so raw
/// and normalized weights give the same value.
double effective_sample_size(std::span<const double> weights);

/// Monte Carlo entropy of the reweighted ensemble relative to the sampling
/// distribution, in nats: -sum w~_i log(n * w~_i) with w~ = w / sum(w).
/// Zero weights contribute nothing (x log x -> 0). Always <= 0; equals 0
/// exactly when all weights are equal and positive.
double entropy_estimate(std::span<const double> weights);

/// Mean raw weight. Equals 1 in expectation when the estimated induced
/// density matches the true one and the target is normalized.
double normalization_check(std::span<const double> w_raw);

struct ReweightReport {
  std::int64_t n = 0;
  double ess = 0.0;
  double entropy = 0.0;
  double normalization_mc = 0.0;
  double clipped_fraction = 0.0;
  std::string estimator_summary;
  std::vector<std::string> warnings;
};

/// Threshold above which the clipped fraction signals a target/induced
/// support mismatch and a warning lands in the report.
inline constexpr double kClippedWarnFraction = 0.01;

ReweightReport make_reweight_report(const RawWeights& raw, const DensityEstimate& est);

}  // namespace maxent
