#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace maxent {

/// A point in parameter space; length equals the configured dimension.
using ParameterVector = std::vector<double>;

/// Row-major n x dim storage for large sample sets.
struct SampleMatrix {
  std::int64_t n = 0;
  int dim = 0;
  std::vector<double> data;

  std::span<const double> row(std::int64_t i) const {
    return {data.data() + i * dim, static_cast<std::size_t>(dim)};
  }
};

enum class BaseFamily { UniformBox, IndependentGaussian, GaussianOnLog };

/// Declarative description of the base distribution q(x).
///
/// UniformBox           uniform on the box prod_k [lo_k, hi_k).
/// IndependentGaussian  independent N(mean_k, sigma_k) per component.
/// GaussianOnLog        positive components whose logs are independent
///                      Gaussians. Points live in linear space; the density
///                      is expressed on the log-variable itself (no Jacobian
///                      term), so evaluating at x returns the Gaussian
///                      density of log(x).
struct BaseDistributionSpec {
  BaseFamily family = BaseFamily::UniformBox;
  int dimension = 1;
  std::vector<double> lo, hi;      // UniformBox
  std::vector<double> mean, sigma; // Gaussian families

  void validate() const;

  /// Fingerprint of the canonical textual form, for batch provenance.
  std::uint64_t hash() const;

  std::string describe() const;
};

/// log q(x); -inf outside the support (outside the box, or any x_k <= 0 for
/// GaussianOnLog). Throws on dimension mismatch or non-finite input.
double base_log_density(const BaseDistributionSpec& spec, std::span<const double> x);

enum class TargetFamily { UniformInterval, Gaussian, GaussianOnLog };

/// The desired distribution r(f) of the derived parameter.
///
/// Gaussian supports are truncated at 8.5 sigma (tail mass ~1e-17, below
/// every tolerance used anywhere in the engine); GaussianOnLog is the
/// corresponding log-normal on f > 0.
struct TargetSpec {
  TargetFamily family = TargetFamily::UniformInterval;
  double lo = 0.0, hi = 1.0;       // UniformInterval
  double mean = 0.0, sigma = 1.0;  // Gaussian families

  void validate() const;
  double support_lo() const;
  double support_hi() const;
  std::string describe() const;
};

/// r(f) >= 0; zero outside the support. Throws on non-finite f.
double target_pdf(const TargetSpec& t, double f);

/// c(f) in [0,1], nondecreasing. Throws on non-finite f.
double target_cdf(const TargetSpec& t, double f);

/// Samples with their derived values and importance weights.
/// Invariants: w_raw, w_norm nonnegative; sum of w_norm is 1 up to one
/// rounding renormalization; weights depend on x only through f.
struct WeightedEnsemble {
  SampleMatrix samples;
  std::vector<double> f_values;
  std::vector<double> w_raw;
  std::vector<double> w_norm;
  std::int64_t clipped_count = 0;
  std::uint64_t seed = 0;
};

}  // namespace maxent
