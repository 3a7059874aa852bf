#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "maxent/error.hpp"
#include "maxent/model.hpp"
#include "maxent/numeric.hpp"
#include "maxent/sampling.hpp"

using namespace maxent;

namespace {

BaseDistributionSpec unit_square() {
  BaseDistributionSpec s;
  s.family = BaseFamily::UniformBox;
  s.dimension = 2;
  s.lo = {0.0, 0.0};
  s.hi = {1.0, 1.0};
  return s;
}

BaseDistributionSpec gaussian3(double sigma) {
  BaseDistributionSpec s;
  s.family = BaseFamily::IndependentGaussian;
  s.dimension = 3;
  s.mean = {0.0, 0.0, 0.0};
  s.sigma = {sigma, sigma, sigma};
  return s;
}

// One-sample KS distance of a sorted column against an analytic CDF.
template <typename Cdf>
double ks_against(std::vector<double> values, Cdf&& cdf) {
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double c = cdf(values[i]);
    d = std::max(d, std::fabs(static_cast<double>(i) / n - c));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - c));
  }
  return d;
}

std::vector<double> column(const SampleBatch& b, int k) {
  std::vector<double> out(static_cast<std::size_t>(b.points.n));
  for (std::int64_t i = 0; i < b.points.n; ++i)
    out[static_cast<std::size_t>(i)] =
        b.points.data[static_cast<std::size_t>(i) * b.points.dim + k];
  return out;
}

}  // namespace

TEST_CASE("sample_base basic contracts") {
  const auto spec = unit_square();
  CHECK(sample_base(spec, 0, 1).points.n == 0);
  CHECK_THROWS_AS(sample_base(spec, -1, 1), ConfigError);

  const auto batch = sample_base(spec, 1000, 7);
  CHECK(batch.seed == 7);
  CHECK(batch.spec_hash == spec.hash());
  CHECK(batch.points.dim == 2);
  for (double v : batch.points.data) {
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("identical (spec, seed, n) is bit-identical for any thread count") {
  const auto spec = gaussian3(2.0);
  const auto a = sample_base(spec, 100000, 42, 1);
  const auto b = sample_base(spec, 100000, 42, 4);
  const auto c = sample_base(spec, 100000, 42, 7);
  CHECK(a.points.data == b.points.data);
  CHECK(a.points.data == c.points.data);

  const auto other_seed = sample_base(spec, 100000, 43, 1);
  CHECK(a.points.data != other_seed.points.data);
}

TEST_CASE("uniform box sample means obey the CLT bound") {
  const auto batch = sample_base(unit_square(), 1000000, 42);
  for (int k = 0; k < 2; ++k) {
    const auto col = column(batch, k);
    const double mean = kahan_total(col) / static_cast<double>(col.size());
    CHECK(std::fabs(mean - 0.5) < 0.002);  // 3 sigma at sigma = 1/sqrt(12)/1e3
  }
}

TEST_CASE("gaussian sample stddev within one percent") {
  const auto batch = sample_base(gaussian3(5.0), 1000000, 11);
  for (int k = 0; k < 3; ++k) {
    const auto col = column(batch, k);
    const double n = static_cast<double>(col.size());
    const double mean = kahan_total(col) / n;
    KahanSum ss;
    for (double v : col) ss.add((v - mean) * (v - mean));
    const double stddev = std::sqrt(ss.value() / (n - 1.0));
    CHECK(std::fabs(stddev - 5.0) / 5.0 < 0.01);
  }
}

TEST_CASE("gaussian-on-log samples are positive and log-normal") {
  BaseDistributionSpec spec;
  spec.family = BaseFamily::GaussianOnLog;
  spec.dimension = 2;
  spec.mean = {0.0, 1.0};
  spec.sigma = {5.0, 0.5};
  const auto batch = sample_base(spec, 100000, 5);
  for (double v : batch.points.data) CHECK(v > 0.0);

  for (int k = 0; k < 2; ++k) {
    const double mu = spec.mean[k], sig = spec.sigma[k];
    const double d = ks_against(column(batch, k), [&](double m) {
      return norm_cdf((std::log(m) - mu) / sig);
    });
    CHECK(d < 1.63 / std::sqrt(100000.0));
  }
}

TEST_CASE("marginals pass a KS test against their analytic CDFs") {
  const double bound = 1.63 / std::sqrt(100000.0);  // alpha ~ 0.01

  const auto ubatch = sample_base(unit_square(), 100000, 12);
  for (int k = 0; k < 2; ++k) {
    CHECK(ks_against(column(ubatch, k), [](double x) { return x; }) < bound);
  }
  const auto gbatch = sample_base(gaussian3(5.0), 100000, 13);
  for (int k = 0; k < 3; ++k) {
    CHECK(ks_against(column(gbatch, k), [](double x) { return norm_cdf(x / 5.0); }) <
          bound);
  }
}

TEST_CASE("derived_values maps the expression over the batch") {
  SampleBatch batch;
  batch.points.n = 2;
  batch.points.dim = 2;
  batch.points.data = {0.0, 0.0, 1.0, 1.0};
  const auto f = derived_values(batch, parse("x1+x2", 2));
  CHECK(f == std::vector<double>{0.0, 2.0});

  SampleBatch empty;
  empty.points.dim = 2;
  CHECK(derived_values(empty, parse("x1+x2", 2)).empty());

  CHECK_THROWS_AS(derived_values(batch, parse("x1+x2+x3", 3)), ConfigError);
}

TEST_CASE("derived sample mean of x1+x2 on the unit square") {
  const auto batch = sample_base(unit_square(), 1000000, 42);
  const auto f = derived_values(batch, parse("x1+x2", 2));
  const double mean = kahan_total(f) / static_cast<double>(f.size());
  CHECK(std::fabs(mean - 1.0) < 0.002);
}

TEST_CASE("derived_values reports the failing sample index") {
  SampleBatch batch;
  batch.points.n = 3;
  batch.points.dim = 1;
  batch.points.data = {1.0, -1.0, 2.0};
  try {
    derived_values(batch, parse("log(x1)", 1));
    FAIL("expected EvalError");
  } catch (const EvalError& err) {
    CHECK(std::string(err.what()).find("sample 1") != std::string::npos);
  }
  // The smallest failing index is reported under any thread count.
  try {
    derived_values(batch, parse("log(x1)", 1), 3);
    FAIL("expected EvalError");
  } catch (const EvalError& err) {
    CHECK(std::string(err.what()).find("sample 1") != std::string::npos);
  }
}
