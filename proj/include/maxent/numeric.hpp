#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace maxent {

/// Compensated (Kahan) accumulator. Summation order is the caller's; for
/// reproducible reductions keep a fixed iteration order.
class KahanSum {
 public:
  void add(double v) {
    const double y = v - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

double kahan_total(std::span<const double> values);

/// Standard normal density.
double norm_pdf(double z);

/// Standard normal CDF, erfc-based so both tails keep full precision.
double norm_cdf(double z);

/// Inverse standard normal CDF. Wichura's rational approximation with one
/// Newton refinement against norm_cdf. p in (0,1); the endpoints map to
/// -inf/+inf.
double norm_quantile(double p);

/// Linear-interpolation quantile of an ascending-sorted array, q in [0,1].
double quantile_sorted(std::span<const double> sorted, double q);

/// FNV-1a over a byte string. Used for spec fingerprints in batch metadata.
std::uint64_t fnv1a64(std::string_view bytes);

/// Formats with 17 significant digits (round-trip exact for doubles).
std::string format_double(double v);

/// Shortest representation that parses back to the same double.
std::string format_double_shortest(double v);

}  // namespace maxent
