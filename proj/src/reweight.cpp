#include "maxent/reweight.hpp"

#include <atomic>
#include <cmath>

#include "maxent/error.hpp"
#include "maxent/numeric.hpp"
#include "maxent/parallel.hpp"

namespace maxent {

namespace {

template <typename TargetPdf>
RawWeights raw_weights_impl(std::span<const double> f_values, const DensityEstimate& est,
                            TargetPdf&& target, int threads) {
  const auto n = static_cast<std::int64_t>(f_values.size());
  RawWeights out;
  out.weights.resize(f_values.size());

  std::vector<std::int64_t> clipped_per_chunk(std::max(1, threads), 0);
  std::atomic<int> chunk_id{0};

  // clipped counts are integers, so cross-chunk summation order is exact.
  parallel_for(n, threads, [&](std::int64_t begin, std::int64_t end) {
    const int me = chunk_id.fetch_add(1);
    std::int64_t clipped = 0;
    for (std::int64_t i = begin; i < end; ++i) {
      const double f = f_values[static_cast<std::size_t>(i)];
      const double r = target(f);
      double w = 0.0;
      if (r > 0.0) {
        const double p = eval_pdf(est, f);
        if (p > 0.0) {
          w = r / p;
        } else {
          ++clipped;
        }
      }
      out.weights[static_cast<std::size_t>(i)] = w;
    }
    clipped_per_chunk[static_cast<std::size_t>(me)] += clipped;
  });

  for (std::int64_t c : clipped_per_chunk) out.clipped_count += c;

  bool any_positive = false;
  for (double w : out.weights)
    if (w > 0.0) { any_positive = true; break; }
  if (n > 0 && !any_positive)
    throw Error("target support disjoint from induced support: all weights are zero");
  return out;
}

}  // namespace

RawWeights compute_raw_weights(std::span<const double> f_values,
                               const DensityEstimate& est, const TargetSpec& target,
                               int threads) {
  target.validate();
  return raw_weights_impl(
      f_values, est, [&](double f) { return target_pdf(target, f); }, threads);
}

RawWeights compute_raw_weights(std::span<const double> f_values,
                               const DensityEstimate& est,
                               const DensityEstimate& target_density, int threads) {
  return raw_weights_impl(
      f_values, est, [&](double f) { return eval_pdf(target_density, f); }, threads);
}

std::vector<double> normalize_weights(std::span<const double> w_raw) {
  const double total = kahan_total(w_raw);
  if (!(total > 0.0)) throw Error("normalize_weights: all weights are zero");
  std::vector<double> out(w_raw.size());
  const double inv = 1.0 / total;
  for (std::size_t i = 0; i < w_raw.size(); ++i) out[i] = w_raw[i] * inv;
  return out;
}

double effective_sample_size(std::span<const double> weights) {
  KahanSum sum, sum_sq;
  for (double w : weights) {
    sum.add(w);
    sum_sq.add(w * w);
  }
  if (!(sum_sq.value() > 0.0)) throw Error("effective_sample_size: all weights are zero");
  return (sum.value() * sum.value()) / sum_sq.value();
}

double entropy_estimate(std::span<const double> weights) {
  const auto n = static_cast<double>(weights.size());
  const double total = kahan_total(weights);
  if (!(total > 0.0)) throw Error("entropy_estimate: all weights are zero");
  const double scale = n / total;
  KahanSum acc;
  for (double w : weights) {
    if (w > 0.0) acc.add((w / total) * std::log(w * scale));
  }
  return -acc.value();
}

double normalization_check(std::span<const double> w_raw) {
  if (w_raw.empty()) return 0.0;
  return kahan_total(w_raw) / static_cast<double>(w_raw.size());
}

ReweightReport make_reweight_report(const RawWeights& raw, const DensityEstimate& est) {
  ReweightReport rep;
  rep.n = static_cast<std::int64_t>(raw.weights.size());
  rep.ess = effective_sample_size(raw.weights);
  rep.entropy = entropy_estimate(raw.weights);
  rep.normalization_mc = normalization_check(raw.weights);
  rep.clipped_fraction =
      (rep.n > 0) ? static_cast<double>(raw.clipped_count) / static_cast<double>(rep.n) : 0.0;
  rep.estimator_summary = est.summary();
  if (rep.clipped_fraction > kClippedWarnFraction) {
    rep.warnings.push_back(
        "clipped_fraction " + format_double_shortest(rep.clipped_fraction) +
        " exceeds " + format_double_shortest(kClippedWarnFraction) +
        ": the target has mass where the estimated induced density vanishes");
  }
  return rep;
}

}  // namespace maxent
