#include "maxent/density.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "maxent/error.hpp"
#include "maxent/numeric.hpp"

namespace maxent {

namespace {

constexpr std::int64_t kMinSamples = 100;
constexpr int kKnots = 1024;
constexpr int kMinBins = 16;
constexpr int kMaxBins = 512;
constexpr double kFloorFraction = 1e-12;
constexpr double kKernelCut = 8.0;  // kernel truncated at this many bandwidths

struct DataStats {
  double min, max, iqr, stddev;
};

DataStats inspect(std::span<const double> f) {
  if (static_cast<std::int64_t>(f.size()) < kMinSamples)
    throw ConfigError("density fit requires at least " + std::to_string(kMinSamples) +
                      " samples");
  std::vector<double> sorted(f.begin(), f.end());
  for (double v : sorted)
    if (!std::isfinite(v)) throw ConfigError("density fit: non-finite value");
  std::sort(sorted.begin(), sorted.end());

  DataStats s;
  s.min = sorted.front();
  s.max = sorted.back();
  if (s.min == s.max) throw ConfigError("density fit: degenerate support (all values equal)");
  s.iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);

  KahanSum mean_acc;
  for (double v : sorted) mean_acc.add(v);
  const double mean = mean_acc.value() / static_cast<double>(sorted.size());
  KahanSum var_acc;
  for (double v : sorted) var_acc.add((v - mean) * (v - mean));
  s.stddev = std::sqrt(var_acc.value() / static_cast<double>(sorted.size() - 1));
  return s;
}

// Right-open bins; the top edge belongs to the last bin so every in-range
// value maps somewhere.
inline std::int64_t bin_index(double f, double lo, double step, std::int64_t bins) {
  auto idx = static_cast<std::int64_t>((f - lo) / step);
  return std::min(idx, bins - 1);
}

void finalize(DensityEstimate& est) {
  double peak = 0.0;
  for (double v : est.pdf) peak = std::max(peak, v);
  est.floor_eps = kFloorFraction * peak;
}

}  // namespace

std::string DensityEstimate::summary() const {
  std::ostringstream os;
  if (kind == EstimatorKind::Histogram) {
    os << "histogram(bins=" << pdf.size();
  } else {
    os << "kde(knots=" << pdf.size() << ", bandwidth=" << format_double_shortest(bandwidth);
  }
  os << ", support=[" << format_double_shortest(lo) << ", " << format_double_shortest(hi)
     << "], n=" << n_source << ")";
  return os.str();
}

DensityEstimate fit_histogram(std::span<const double> f_values, std::optional<int> bins) {
  const DataStats s = inspect(f_values);
  const auto n = static_cast<std::int64_t>(f_values.size());

  int nbins;
  if (bins) {
    if (*bins < 2) throw ConfigError("fit_histogram: bins must be >= 2");
    nbins = *bins;
  } else {
    const double width =
        2.0 * s.iqr * std::pow(static_cast<double>(n), -1.0 / 3.0);
    if (width > 0.0) {
      const double raw = std::ceil((s.max - s.min) / width);
      nbins = static_cast<int>(std::clamp(raw, double(kMinBins), double(kMaxBins)));
    } else {
      // Zero IQR with non-degenerate support; fall back to the sqrt rule.
      const double raw = std::ceil(std::sqrt(static_cast<double>(n)));
      nbins = static_cast<int>(std::clamp(raw, double(kMinBins), double(kMaxBins)));
    }
  }

  DensityEstimate est;
  est.kind = EstimatorKind::Histogram;
  est.lo = s.min;
  est.hi = s.max;
  est.step = (s.max - s.min) / nbins;
  est.n_source = n;

  std::vector<std::int64_t> counts(nbins, 0);
  for (double v : f_values) ++counts[bin_index(v, est.lo, est.step, nbins)];

  est.pdf.resize(nbins);
  const double norm = 1.0 / (static_cast<double>(n) * est.step);
  for (int b = 0; b < nbins; ++b) est.pdf[b] = static_cast<double>(counts[b]) * norm;

  est.cdf.resize(nbins + 1);
  est.cdf[0] = 0.0;
  KahanSum cum;
  for (int b = 0; b < nbins; ++b) {
    cum.add(est.pdf[b] * est.step);
    est.cdf[b + 1] = cum.value();
  }
  const double total = est.cdf[nbins];
  for (auto& c : est.cdf) c /= total;
  est.cdf[nbins] = 1.0;

  finalize(est);
  return est;
}

DensityEstimate fit_kde(std::span<const double> f_values, std::optional<double> bandwidth) {
  const DataStats s = inspect(f_values);
  const auto n = static_cast<std::int64_t>(f_values.size());

  double h;
  if (bandwidth) {
    if (!(*bandwidth > 0.0)) throw ConfigError("fit_kde: bandwidth must be > 0");
    h = *bandwidth;
  } else {
    const double scale = (s.iqr > 0.0) ? std::min(s.stddev, s.iqr / 1.34) : s.stddev;
    h = 0.9 * scale * std::pow(static_cast<double>(n), -0.2);
    if (!(h > 0.0)) throw ConfigError("fit_kde: automatic bandwidth is zero");
  }

  DensityEstimate est;
  est.kind = EstimatorKind::Kde;
  est.bandwidth = h;
  est.lo = s.min - 3.0 * h;
  est.hi = s.max + 3.0 * h;
  est.step = (est.hi - est.lo) / (kKnots - 1);
  est.n_source = n;

  // Linear binning of unit masses onto the knot grid.
  std::vector<double> mass(kKnots, 0.0);
  const double inv_step = 1.0 / est.step;
  for (double v : f_values) {
    const double g = (v - est.lo) * inv_step;
    auto i0 = static_cast<std::int64_t>(g);
    i0 = std::min<std::int64_t>(i0, kKnots - 2);
    const double frac = g - static_cast<double>(i0);
    mass[i0] += 1.0 - frac;
    mass[i0 + 1] += frac;
  }

  // Discretely normalized Gaussian kernel on the knot lattice.
  const auto half_width =
      std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(kKernelCut * h * inv_step)));
  std::vector<double> kernel(half_width + 1);
  KahanSum ksum;
  for (std::int64_t m = -half_width; m <= half_width; ++m) {
    const double z = static_cast<double>(m) * est.step / h;
    const double k = std::exp(-0.5 * z * z);
    if (m >= 0) kernel[m] = k;
    ksum.add(k);
  }
  const double kernel_norm = 1.0 / (ksum.value() * est.step);
  for (auto& k : kernel) k *= kernel_norm;

  est.pdf.assign(kKnots, 0.0);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::int64_t g = 0; g < kKnots; ++g) {
    if (mass[g] == 0.0) continue;
    const double m = mass[g] * inv_n;
    const std::int64_t a = std::max<std::int64_t>(0, g - half_width);
    const std::int64_t b = std::min<std::int64_t>(kKnots - 1, g + half_width);
    for (std::int64_t k = a; k <= b; ++k) est.pdf[k] += m * kernel[std::llabs(k - g)];
  }

  est.cdf.resize(kKnots);
  est.cdf[0] = 0.0;
  KahanSum cum;
  for (int k = 1; k < kKnots; ++k) {
    cum.add(0.5 * (est.pdf[k - 1] + est.pdf[k]) * est.step);
    est.cdf[k] = cum.value();
  }
  const double total = est.cdf[kKnots - 1];
  for (auto& c : est.cdf) c /= total;
  est.cdf[kKnots - 1] = 1.0;

  finalize(est);
  return est;
}

double eval_pdf(const DensityEstimate& est, double f) {
  if (!std::isfinite(f)) throw ConfigError("eval_pdf: non-finite argument");
  if (f < est.lo || f > est.hi) return 0.0;

  double v;
  if (est.kind == EstimatorKind::Histogram) {
    v = est.pdf[bin_index(f, est.lo, est.step, static_cast<std::int64_t>(est.pdf.size()))];
  } else {
    const double g = (f - est.lo) / est.step;
    auto i0 = static_cast<std::int64_t>(g);
    i0 = std::min<std::int64_t>(i0, static_cast<std::int64_t>(est.pdf.size()) - 2);
    const double frac = g - static_cast<double>(i0);
    v = est.pdf[i0] * (1.0 - frac) + est.pdf[i0 + 1] * frac;
  }
  return (v < est.floor_eps) ? 0.0 : v;
}

double eval_cdf(const DensityEstimate& est, double f) {
  if (!std::isfinite(f)) throw ConfigError("eval_cdf: non-finite argument");
  if (f <= est.lo) return 0.0;
  if (f >= est.hi) return 1.0;

  if (est.kind == EstimatorKind::Histogram) {
    const auto bins = static_cast<std::int64_t>(est.pdf.size());
    const std::int64_t b = bin_index(f, est.lo, est.step, bins);
    const double within = f - (est.lo + static_cast<double>(b) * est.step);
    const double slope = (est.cdf[b + 1] - est.cdf[b]) / est.step;
    return est.cdf[b] + slope * within;
  }
  const double g = (f - est.lo) / est.step;
  auto i0 = static_cast<std::int64_t>(g);
  i0 = std::min<std::int64_t>(i0, static_cast<std::int64_t>(est.cdf.size()) - 2);
  const double frac = g - static_cast<double>(i0);
  return est.cdf[i0] * (1.0 - frac) + est.cdf[i0 + 1] * frac;
}

}  // namespace maxent
