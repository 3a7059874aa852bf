#include "maxent/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "maxent/error.hpp"
#include "maxent/numeric.hpp"
#include "maxent/reweight.hpp"

namespace maxent {

namespace {

constexpr int kLevelSetBins = 40;
constexpr double kLevelSetMeanLimit = 0.05;

std::int64_t clamped_bin(double v, double lo, double width, std::int64_t bins) {
  auto idx = static_cast<std::int64_t>((v - lo) / width);
  return std::min(idx, bins - 1);
}

}  // namespace

double weighted_ks(std::span<const double> f_values, std::span<const double> w_norm,
                   const TargetSpec& target) {
  if (f_values.empty()) throw Error("weighted_ks: empty input");
  if (f_values.size() != w_norm.size())
    throw ConfigError("weighted_ks: length mismatch between values and weights");
  target.validate();

  std::vector<std::size_t> order(f_values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return f_values[a] < f_values[b]; });

  const double total = kahan_total(w_norm);
  if (!(total > 0.0)) throw Error("weighted_ks: all weights are zero");

  KahanSum cum;
  double d = 0.0;
  for (std::size_t i : order) {
    const double before = cum.value() / total;
    cum.add(w_norm[i]);
    const double after = cum.value() / total;
    const double c = target_cdf(target, f_values[i]);
    d = std::max(d, std::fabs(before - c));
    d = std::max(d, std::fabs(after - c));
  }
  return d;
}

DensityTable weighted_histogram(std::span<const double> f_values,
                                std::span<const double> w_norm, int bins, double lo,
                                double hi) {
  if (bins < 2) throw ConfigError("weighted_histogram: bins must be >= 2");
  if (!(lo < hi)) throw ConfigError("weighted_histogram: invalid range");
  if (f_values.size() != w_norm.size())
    throw ConfigError("weighted_histogram: length mismatch");

  DensityTable table;
  table.lo = lo;
  table.hi = hi;
  table.width = (hi - lo) / bins;
  std::vector<KahanSum> mass(bins);
  for (std::size_t i = 0; i < f_values.size(); ++i) {
    const double f = f_values[i];
    if (f < lo || f > hi) continue;
    mass[clamped_bin(f, lo, table.width, bins)].add(w_norm[i]);
  }
  table.density.resize(bins);
  for (int b = 0; b < bins; ++b) table.density[b] = mass[b].value() / table.width;
  return table;
}

DensityTable weighted_marginal(const SampleMatrix& samples,
                               std::span<const double> w_norm, int dimension_index,
                               int bins, double lo, double hi) {
  if (dimension_index < 1 || dimension_index > samples.dim)
    throw ConfigError("weighted_marginal: dimension index out of range");
  if (static_cast<std::size_t>(samples.n) != w_norm.size())
    throw ConfigError("weighted_marginal: length mismatch");
  if (bins < 2) throw ConfigError("weighted_marginal: bins must be >= 2");
  if (!(lo < hi)) throw ConfigError("weighted_marginal: invalid range");

  DensityTable table;
  table.lo = lo;
  table.hi = hi;
  table.width = (hi - lo) / bins;
  std::vector<KahanSum> mass(bins);
  const int k = dimension_index - 1;
  for (std::int64_t i = 0; i < samples.n; ++i) {
    const double v = samples.data[static_cast<std::size_t>(i) * samples.dim + k];
    if (v < lo || v > hi) continue;
    mass[clamped_bin(v, lo, table.width, bins)].add(w_norm[static_cast<std::size_t>(i)]);
  }
  table.density.resize(bins);
  for (int b = 0; b < bins; ++b) table.density[b] = mass[b].value() / table.width;
  return table;
}

PerturbationResult perturbation_entropy_test(const WeightedEnsemble& ensemble,
                                             const DerivedExpr& s,
                                             std::span<const double> deltas) {
  const auto n = static_cast<std::size_t>(ensemble.samples.n);
  if (n == 0) throw Error("perturbation_entropy_test: empty ensemble");
  for (double d : deltas)
    if (!(std::fabs(d) < 1.0))
      throw ConfigError("perturbation_entropy_test: |delta| must be < 1");

  std::vector<double> sval(n);
  for (std::size_t i = 0; i < n; ++i) {
    sval[i] = evaluate(s, ensemble.samples.row(static_cast<std::int64_t>(i)));
    if (std::fabs(sval[i]) > 1.0 + 1e-12)
      throw ConfigError("perturbation direction must evaluate within [-1, 1]; got " +
                        format_double_shortest(sval[i]) + " at sample " +
                        std::to_string(i));
  }

  PerturbationResult result;

  // Level-set check: the weighted mean of s inside each f-bin should
  // vanish, otherwise the perturbation moves mass across level sets and the
  // entropy ordering is not a statement about this constraint.
  const auto [fmin_it, fmax_it] =
      std::minmax_element(ensemble.f_values.begin(), ensemble.f_values.end());
  if (*fmax_it > *fmin_it) {
    const double lo = *fmin_it;
    const double width = (*fmax_it - lo) / kLevelSetBins;
    std::vector<KahanSum> num(kLevelSetBins), den(kLevelSetBins);
    for (std::size_t i = 0; i < n; ++i) {
      const auto b = clamped_bin(ensemble.f_values[i], lo, width, kLevelSetBins);
      num[b].add(ensemble.w_norm[i] * sval[i]);
      den[b].add(ensemble.w_norm[i]);
    }
    for (int b = 0; b < kLevelSetBins; ++b) {
      if (!(den[b].value() > 0.0)) continue;
      const double m = num[b].value() / den[b].value();
      if (std::fabs(m) > kLevelSetMeanLimit) {
        result.warnings.push_back("level-set mean of s is " + format_double_shortest(m) +
                                  " in f-bin " + std::to_string(b) +
                                  "; the perturbation is not constraint-preserving");
      }
    }
  }

  std::vector<double> perturbed(n);
  for (double delta : deltas) {
    for (std::size_t i = 0; i < n; ++i) {
      const double w = ensemble.w_norm[i] * (1.0 + delta * sval[i]);
      if (w < 0.0)
        throw Error("perturbation produced a negative weight at sample " +
                    std::to_string(i));
      perturbed[i] = w;
    }
    result.entropies.emplace_back(delta, entropy_estimate(perturbed));
  }
  return result;
}

double triangular_oracle_pdf(double f) {
  if (f < 0.0 || f > 2.0) return 0.0;
  return (f <= 1.0) ? f : 2.0 - f;
}

double triangular_oracle_marginal(double a) {
  if (!(a > 0.0 && a < 1.0))
    throw ConfigError("triangular_oracle_marginal: diverges outside (0,1)");
  return -std::log(a * (1.0 - a)) / 2.0;
}

}  // namespace maxent
