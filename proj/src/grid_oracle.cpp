#include "maxent/grid_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "maxent/error.hpp"
#include "maxent/numeric.hpp"

namespace maxent {

namespace {

constexpr double kGridSigmas = 4.0;

struct GridEval {
  std::vector<double> f;     // derived value per cell
  std::vector<double> mass;  // normalized cell mass
};

// Walks every cell once: separable per-axis masses, expression evaluated at
// the (possibly exponentiated) cell center.
GridEval evaluate_grid(const BaseDistributionSpec& spec, const DerivedExpr& e,
                       const GridSpec& grid) {
  spec.validate();
  grid.validate();
  if (spec.dimension > 3)
    throw ConfigError("grid oracle supports at most 3 dimensions");
  if (static_cast<int>(grid.axes.size()) != spec.dimension)
    throw ConfigError("grid axes must match the base dimension");
  if (e.dimension != spec.dimension)
    throw ConfigError("expression dimension must match the base dimension");

  const int dim = spec.dimension;
  const bool log_space = spec.family == BaseFamily::GaussianOnLog;

  // Per-axis centers (grid space), expression-space coordinates, and
  // one-dimensional masses.
  std::vector<std::vector<double>> coord(dim), axis_mass(dim);
  for (int k = 0; k < dim; ++k) {
    const auto& ax = grid.axes[k];
    const double step = (ax.hi - ax.lo) / ax.points;
    coord[k].resize(ax.points);
    axis_mass[k].resize(ax.points);
    for (int i = 0; i < ax.points; ++i) {
      const double c = ax.lo + (i + 0.5) * step;
      coord[k][i] = log_space ? std::exp(c) : c;
      double density_1d = 0.0;
      switch (spec.family) {
        case BaseFamily::UniformBox:
          density_1d = (c >= spec.lo[k] && c < spec.hi[k])
                           ? 1.0 / (spec.hi[k] - spec.lo[k])
                           : 0.0;
          break;
        case BaseFamily::IndependentGaussian:
        case BaseFamily::GaussianOnLog:
          density_1d = norm_pdf((c - spec.mean[k]) / spec.sigma[k]) / spec.sigma[k];
          break;
      }
      axis_mass[k][i] = density_1d * step;
    }
  }

  const std::int64_t total = grid.total_points();
  GridEval out;
  out.f.resize(static_cast<std::size_t>(total));
  out.mass.resize(static_cast<std::size_t>(total));

  double x[3];
  std::int64_t idx = 0;
  KahanSum mass_total;
  const int n0 = grid.axes[0].points;
  const int n1 = dim > 1 ? grid.axes[1].points : 1;
  const int n2 = dim > 2 ? grid.axes[2].points : 1;
  for (int i0 = 0; i0 < n0; ++i0) {
    x[0] = coord[0][i0];
    const double m0 = axis_mass[0][i0];
    for (int i1 = 0; i1 < n1; ++i1) {
      double m01 = m0;
      if (dim > 1) {
        x[1] = coord[1][i1];
        m01 *= axis_mass[1][i1];
      }
      for (int i2 = 0; i2 < n2; ++i2) {
        double m = m01;
        if (dim > 2) {
          x[2] = coord[2][i2];
          m *= axis_mass[2][i2];
        }
        out.f[static_cast<std::size_t>(idx)] =
            evaluate(e, std::span<const double>(x, static_cast<std::size_t>(dim)));
        out.mass[static_cast<std::size_t>(idx)] = m;
        mass_total.add(m);
        ++idx;
      }
    }
  }

  if (!(mass_total.value() > 0.0))
    throw Error("grid oracle: the grid carries no base-distribution mass");
  const double inv = 1.0 / mass_total.value();
  for (auto& m : out.mass) m *= inv;
  return out;
}

DensityTable bin_masses(const GridEval& cells, int f_bins) {
  const auto [lo_it, hi_it] = std::minmax_element(cells.f.begin(), cells.f.end());
  const double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) throw Error("grid oracle: derived value is constant on the grid");

  DensityTable table;
  table.lo = lo;
  table.hi = hi;
  table.width = (hi - lo) / f_bins;
  std::vector<KahanSum> mass(f_bins);
  for (std::size_t i = 0; i < cells.f.size(); ++i) {
    auto b = static_cast<std::int64_t>((cells.f[i] - lo) / table.width);
    b = std::min<std::int64_t>(b, f_bins - 1);
    mass[static_cast<std::size_t>(b)].add(cells.mass[i]);
  }
  table.density.resize(f_bins);
  for (int b = 0; b < f_bins; ++b) table.density[b] = mass[b].value() / table.width;
  return table;
}

template <typename TargetPdf>
double entropy_impl(const BaseDistributionSpec& spec, const DerivedExpr& e,
                    TargetPdf&& target, const GridSpec& grid, int f_bins) {
  const GridEval cells = evaluate_grid(spec, e, grid);
  const DensityTable induced = bin_masses(cells, f_bins);

  // H = log Z - S2/Z with Z = sum m*t, S2 = sum m*t*log(t), t = r(f)/P(f);
  // this is the entropy of the normalized transformed mass against the
  // grid's base mass.
  KahanSum z_acc, s2_acc;
  for (std::size_t i = 0; i < cells.f.size(); ++i) {
    const double r = target(cells.f[i]);
    if (!(r > 0.0)) continue;
    const double p = table_pdf(induced, cells.f[i]);
    if (!(p > 0.0)) continue;
    const double t = r / p;
    const double mt = cells.mass[i] * t;
    z_acc.add(mt);
    s2_acc.add(mt * std::log(t));
  }
  const double z = z_acc.value();
  if (!(z > 0.0))
    throw Error("transformed_entropy_quadrature: infeasible, target support is "
                "disjoint from the induced support");
  return std::log(z) - s2_acc.value() / z;
}

}  // namespace

void GridSpec::validate() const {
  if (axes.empty() || axes.size() > 3)
    throw ConfigError("grid must have between 1 and 3 axes");
  for (const auto& ax : axes) {
    if (!(ax.lo < ax.hi)) throw ConfigError("grid axis must have lo < hi");
    if (ax.points < 16) throw ConfigError("grid axis must have at least 16 points");
  }
  if (total_points() > kGridPointCap)
    throw ConfigError("grid exceeds the total point cap of 2^24");
}

std::int64_t GridSpec::total_points() const {
  std::int64_t total = 1;
  for (const auto& ax : axes) total *= ax.points;
  return total;
}

GridSpec GridSpec::regular(const BaseDistributionSpec& spec, int points_per_dim) {
  spec.validate();
  GridSpec g;
  for (int k = 0; k < spec.dimension; ++k) {
    if (spec.family == BaseFamily::UniformBox) {
      g.axes.push_back({spec.lo[k], spec.hi[k], points_per_dim});
    } else {
      g.axes.push_back({spec.mean[k] - kGridSigmas * spec.sigma[k],
                        spec.mean[k] + kGridSigmas * spec.sigma[k], points_per_dim});
    }
  }
  return g;
}

DensityTable induced_density_grid(const BaseDistributionSpec& spec, const DerivedExpr& e,
                                  const GridSpec& grid, int f_bins) {
  if (f_bins < 2) throw ConfigError("induced_density_grid: f_bins must be >= 2");
  return bin_masses(evaluate_grid(spec, e, grid), f_bins);
}

double transformed_entropy_quadrature(const BaseDistributionSpec& spec,
                                      const DerivedExpr& e, const TargetSpec& target,
                                      const GridSpec& grid, int f_bins) {
  target.validate();
  return entropy_impl(spec, e, [&](double f) { return target_pdf(target, f); }, grid,
                      f_bins);
}

double transformed_entropy_quadrature(const BaseDistributionSpec& spec,
                                      const DerivedExpr& e, const DensityTable& target,
                                      const GridSpec& grid, int f_bins) {
  return entropy_impl(spec, e, [&](double f) { return table_pdf(target, f); }, grid,
                      f_bins);
}

double table_pdf(const DensityTable& table, double f) {
  if (!std::isfinite(f)) throw ConfigError("table_pdf: non-finite argument");
  if (f < table.lo || f > table.hi) return 0.0;
  auto b = static_cast<std::int64_t>((f - table.lo) / table.width);
  b = std::min<std::int64_t>(b, table.bins() - 1);
  return table.density[static_cast<std::size_t>(b)];
}

}  // namespace maxent
