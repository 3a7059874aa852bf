#pragma once

#include <cstdint>
#include <vector>

#include "maxent/diagnostics.hpp"
#include "maxent/expr.hpp"
#include "maxent/model.hpp"

namespace maxent {

/// Rectangular midpoint grid for 1- to 3-dimensional quadrature.
/// GaussianOnLog bases are gridded in log space (the axes bound the log
/// variable); points are exponentiated before the derived expression is
/// evaluated, matching how sampled points look to the expression.
struct GridSpec {
  struct Axis {
    double lo;
    double hi;
    int points;
  };
  std::vector<Axis> axes;

  void validate() const;
  std::int64_t total_points() const;

  /// Equal resolution on every axis over the base distribution's natural
  /// box: the box itself for UniformBox, mean +- 4 sigma for the Gaussian
  /// families (log-space for GaussianOnLog).
  static GridSpec regular(const BaseDistributionSpec& spec, int points_per_dim);
};

inline constexpr std::int64_t kGridPointCap = std::int64_t(1) << 24;

/// Induced density of f under the base distribution, by mass-binning grid
/// cells on their f value. Cell masses are midpoint-rule (density at the
/// cell center times cell volume), normalized over the grid, so truncated
/// Gaussian mass is renormalized automatically.
DensityTable induced_density_grid(const BaseDistributionSpec& spec, const DerivedExpr& e,
                                  const GridSpec& grid, int f_bins);

/// Entropy of the transformed distribution p = q * r(f) / P(f|q) relative
/// to q, by the same midpoint quadrature; P is the grid's own induced
/// density at `f_bins` bins and p is normalized over the grid before the
/// entropy is taken. Throws if the target has no mass on the induced
/// support.
double transformed_entropy_quadrature(const BaseDistributionSpec& spec,
                                      const DerivedExpr& e, const TargetSpec& target,
                                      const GridSpec& grid, int f_bins = 512);

/// Same, with the target read from a density table (for example the
/// oracle's own induced density, which gives entropy 0).
double transformed_entropy_quadrature(const BaseDistributionSpec& spec,
                                      const DerivedExpr& e, const DensityTable& target,
                                      const GridSpec& grid, int f_bins = 512);

/// Piecewise-constant lookup in a density table; zero outside its range.
double table_pdf(const DensityTable& table, double f);

}  // namespace maxent
