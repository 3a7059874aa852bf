#pragma once

#include <vector>

#include "maxent/density.hpp"
#include "maxent/expr.hpp"
#include "maxent/model.hpp"
#include "maxent/reweight.hpp"
#include "maxent/sampling.hpp"

namespace maxent::testing {

// The triangular flattening setup at full scale, shared across test cases
// because sampling and fitting a million points is worth doing once.
struct TriangularDemo {
  BaseDistributionSpec base;
  TargetSpec target;
  DerivedExpr expr;
  SampleBatch batch;
  std::vector<double> f;
  DensityEstimate est;
  RawWeights raw;
  std::vector<double> w_norm;
  WeightedEnsemble ensemble;
};

inline const TriangularDemo& triangular_demo() {
  static const TriangularDemo demo = [] {
    TriangularDemo d;
    d.base.family = BaseFamily::UniformBox;
    d.base.dimension = 2;
    d.base.lo = {0.0, 0.0};
    d.base.hi = {1.0, 1.0};
    d.target.family = TargetFamily::UniformInterval;
    d.target.lo = 0.0;
    d.target.hi = 2.0;
    d.expr = parse("x1 + x2", 2);
    d.batch = sample_base(d.base, 1000000, 20190101);
    d.f = derived_values(d.batch, d.expr);
    d.est = fit_histogram(d.f, 128);
    d.raw = compute_raw_weights(d.f, d.est, d.target);
    d.w_norm = normalize_weights(d.raw.weights);
    d.ensemble = WeightedEnsemble{d.batch.points, d.f, d.raw.weights, d.w_norm,
                                  d.raw.clipped_count, d.batch.seed};
    return d;
  }();
  return demo;
}

}  // namespace maxent::testing
