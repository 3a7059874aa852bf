#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace maxent {

enum class EstimatorKind { Histogram, Kde };

/// A one-dimensional estimate of the induced density of the derived
/// parameter, with an evaluable PDF and CDF.
///
/// Histogram: `pdf` holds per-bin densities over uniform bins on
/// [lo, hi]; lookups are piecewise constant with right-open bins
/// [e_i, e_{i+1}) and the top edge folded into the last bin. KDE: `pdf`
/// holds knot values on a uniform grid spanning [min-3h, max+3h];
/// evaluation interpolates linearly between knots.
///
/// `cdf` is the normalized cumulative at bin edges (histogram) or knots
/// (KDE): exactly 0 at lo and 1 at hi. Densities below `floor_eps` read as
/// zero through eval_pdf; the floor is 1e-12 of the peak value.
struct DensityEstimate {
  EstimatorKind kind = EstimatorKind::Histogram;
  double lo = 0.0;
  double hi = 1.0;
  double step = 1.0;
  std::vector<double> pdf;
  std::vector<double> cdf;
  double bandwidth = 0.0;  // KDE only
  double floor_eps = 0.0;
  std::int64_t n_source = 0;

  std::string summary() const;
};

/// Histogram estimate. Auto bin count uses Freedman-Diaconis
/// (width 2*IQR*N^(-1/3)) clamped to [16, 512]. Requires N >= 100 and at
/// least two distinct values.
DensityEstimate fit_histogram(std::span<const double> f_values,
                              std::optional<int> bins = std::nullopt);

/// Gaussian-kernel KDE evaluated on a 1024-knot uniform grid. Auto
/// bandwidth is Silverman's rule h = 0.9*min(sigma, IQR/1.34)*N^(-1/5).
/// Samples are mass-deposited onto the knot grid with linear binning and
/// convolved with a discretely normalized kernel truncated at 8h.
DensityEstimate fit_kde(std::span<const double> f_values,
                        std::optional<double> bandwidth = std::nullopt);

/// Estimated density at f: zero outside [lo, hi] and below the floor.
/// Throws on non-finite f.
double eval_pdf(const DensityEstimate& est, double f);

/// Integrated CDF: 0 below support, 1 above. Throws on non-finite f.
double eval_cdf(const DensityEstimate& est, double f);

}  // namespace maxent
