#include "maxent/sampling.hpp"

#include <cmath>
#include <string>

#include "maxent/error.hpp"
#include "maxent/numeric.hpp"
#include "maxent/parallel.hpp"
#include "maxent/rng.hpp"

namespace maxent {

SampleBatch sample_base(const BaseDistributionSpec& spec, std::int64_t n,
                        std::uint64_t seed, int threads) {
  if (n < 0) throw ConfigError("sample_base: negative sample count");
  spec.validate();

  SampleBatch batch;
  batch.seed = seed;
  batch.spec_hash = spec.hash();
  batch.points.n = n;
  batch.points.dim = spec.dimension;
  batch.points.data.resize(static_cast<std::size_t>(n) * spec.dimension);

  const int dim = spec.dimension;
  double* out = batch.points.data.data();

  parallel_for(n, threads, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      double* row = out + i * dim;
      for (int k = 0; k < dim; ++k) {
        const double u = uniform_draw(seed, static_cast<std::uint64_t>(i),
                                      static_cast<std::uint64_t>(k));
        switch (spec.family) {
          case BaseFamily::UniformBox:
            row[k] = spec.lo[k] + (spec.hi[k] - spec.lo[k]) * u;
            break;
          case BaseFamily::IndependentGaussian:
            row[k] = spec.mean[k] + spec.sigma[k] * norm_quantile(u);
            break;
          case BaseFamily::GaussianOnLog:
            row[k] = std::exp(spec.mean[k] + spec.sigma[k] * norm_quantile(u));
            break;
        }
      }
    }
  });
  return batch;
}

std::vector<double> derived_values(const SampleBatch& batch, const DerivedExpr& e,
                                   int threads) {
  if (batch.points.dim != e.dimension)
    throw ConfigError("derived_values: expression dimension " +
                      std::to_string(e.dimension) + " does not match batch dimension " +
                      std::to_string(batch.points.dim));

  std::vector<double> f(static_cast<std::size_t>(batch.points.n));
  parallel_for(batch.points.n, threads, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      try {
        f[static_cast<std::size_t>(i)] = evaluate(e, batch.points.row(i));
      } catch (const EvalError& err) {
        throw EvalError("sample " + std::to_string(i) + ": " + err.what());
      }
    }
  });
  return f;
}

}  // namespace maxent
