#pragma once

#include <cstdint>
#include <vector>

#include "maxent/expr.hpp"
#include "maxent/model.hpp"

namespace maxent {

/// A reproducible i.i.d. draw from a base distribution. Identical
/// (spec, seed, n) gives bit-identical points for any thread count.
struct SampleBatch {
  SampleMatrix points;
  std::uint64_t seed = 0;
  std::uint64_t spec_hash = 0;
};

/// Draws n points from the base distribution. Each point is generated from
/// its own counter-based stream keyed by (seed, index); Gaussian variates
/// use the inverse-CDF transform. GaussianOnLog points are exponentiated
/// into linear space, so every stored component is positive.
SampleBatch sample_base(const BaseDistributionSpec& spec, std::int64_t n,
                        std::uint64_t seed, int threads = 1);

/// f_i = evaluate(e, x_i), order-preserving. A domain error aborts with the
/// smallest failing sample index in the message.
std::vector<double> derived_values(const SampleBatch& batch, const DerivedExpr& e,
                                   int threads = 1);

}  // namespace maxent
