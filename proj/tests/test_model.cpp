#include <doctest.h>

#include <cmath>
#include <random>

#include "maxent/error.hpp"
#include "maxent/model.hpp"

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

TargetSpec gaussian_target(double mean, double sigma) {
  TargetSpec t;
  t.family = TargetFamily::Gaussian;
  t.mean = mean;
  t.sigma = sigma;
  return t;
}

TargetSpec uniform_target(double lo, double hi) {
  TargetSpec t;
  t.family = TargetFamily::UniformInterval;
  t.lo = lo;
  t.hi = hi;
  return t;
}

}  // namespace

TEST_CASE("base_log_density on the unit square") {
  const auto spec = unit_square();
  CHECK(base_log_density(spec, std::vector<double>{0.3, 0.7}) == 0.0);
  CHECK(std::isinf(base_log_density(spec, std::vector<double>{1.5, 0.5})));
  CHECK(base_log_density(spec, std::vector<double>{1.5, 0.5}) < 0.0);
  CHECK_THROWS_AS(base_log_density(spec, std::vector<double>{0.5}), ConfigError);
  CHECK_THROWS_AS(base_log_density(spec, std::vector<double>{0.5, std::nan("")}),
                  ConfigError);
}

TEST_CASE("base_log_density of an isotropic Gaussian") {
  BaseDistributionSpec spec;
  spec.family = BaseFamily::IndependentGaussian;
  spec.dimension = 3;
  spec.mean = {0.0, 0.0, 0.0};
  spec.sigma = {5.0, 5.0, 5.0};
  const double expected = 3.0 * (-std::log(5.0 * std::sqrt(2.0 * M_PI)));
  CHECK(base_log_density(spec, std::vector<double>{0.0, 0.0, 0.0}) ==
        doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("base_log_density on the log of a parameter") {
  BaseDistributionSpec spec;
  spec.family = BaseFamily::GaussianOnLog;
  spec.dimension = 1;
  spec.mean = {0.0};
  spec.sigma = {5.0};
  // Density of the log-variable at log(x): no Jacobian term.
  const double at_one = base_log_density(spec, std::vector<double>{1.0});
  CHECK(at_one == doctest::Approx(-std::log(5.0 * std::sqrt(2.0 * M_PI))).epsilon(1e-14));
  CHECK(std::isinf(base_log_density(spec, std::vector<double>{-1.0})));
  CHECK(std::isinf(base_log_density(spec, std::vector<double>{0.0})));
}

TEST_CASE("uniform box density is constant on its support") {
  BaseDistributionSpec spec;
  spec.family = BaseFamily::UniformBox;
  spec.dimension = 2;
  spec.lo = {-1.0, 2.0};
  spec.hi = {3.0, 4.5};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double ref = base_log_density(
      spec, std::vector<double>{0.0, 3.0});
  for (int i = 0; i < 200; ++i) {
    std::vector<double> x{spec.lo[0] + (spec.hi[0] - spec.lo[0]) * u(rng),
                          spec.lo[1] + (spec.hi[1] - spec.lo[1]) * u(rng)};
    CHECK(base_log_density(spec, x) == doctest::Approx(ref).epsilon(1e-14));
  }
}

TEST_CASE("target_pdf examples") {
  const auto u02 = uniform_target(0.0, 2.0);
  CHECK(target_pdf(u02, 1.0) == 0.5);
  CHECK(target_pdf(u02, 2.5) == 0.0);
  const auto g = gaussian_target(0.0, 5.0);
  CHECK(target_pdf(g, 0.0) ==
        doctest::Approx(1.0 / (5.0 * std::sqrt(2.0 * M_PI))).epsilon(1e-14));
  CHECK_THROWS(target_pdf(g, std::nan("")));
}

TEST_CASE("target_cdf examples") {
  const auto u02 = uniform_target(0.0, 2.0);
  CHECK(target_cdf(u02, 1.0) == 0.5);
  const auto g = gaussian_target(0.0, 5.0);
  CHECK(target_cdf(g, 0.0) == doctest::Approx(0.5).epsilon(1e-14));
  // Independent oracle: Phi(1) from erf.
  const double phi1 = 0.5 * (1.0 + std::erf(1.0 / std::sqrt(2.0)));
  CHECK(target_cdf(g, 5.0) == doctest::Approx(phi1).epsilon(1e-12));
  CHECK_THROWS(target_cdf(g, std::nan("")));
}

TEST_CASE("target_pdf integrates to one over the support") {
  auto integrate = [](const TargetSpec& t) {
    // 1e4-point trapezoid; log-substituted for the log-normal so the grid
    // resolves the peak.
    const int n = 10000;
    double acc = 0.0;
    if (t.family == TargetFamily::GaussianOnLog) {
      const double ulo = std::log(t.support_lo()), uhi = std::log(t.support_hi());
      const double h = (uhi - ulo) / n;
      for (int i = 0; i <= n; ++i) {
        const double u = ulo + i * h;
        const double v = target_pdf(t, std::exp(u)) * std::exp(u);
        acc += (i == 0 || i == n) ? 0.5 * v : v;
      }
      return acc * h;
    }
    const double lo = t.support_lo(), hi = t.support_hi();
    const double h = (hi - lo) / n;
    for (int i = 0; i <= n; ++i) {
      const double v = target_pdf(t, lo + i * h);
      acc += (i == 0 || i == n) ? 0.5 * v : v;
    }
    return acc * h;
  };

  CHECK(integrate(uniform_target(0.0, 2.0)) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(integrate(gaussian_target(0.0, 5.0)) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(integrate(gaussian_target(-3.0, 0.25)) == doctest::Approx(1.0).epsilon(1e-6));
  TargetSpec ln;
  ln.family = TargetFamily::GaussianOnLog;
  ln.mean = 0.0;
  ln.sigma = 5.0;
  CHECK(integrate(ln) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("target_cdf is monotone and consistent with target_pdf") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u01(0.01, 0.99);

  for (const auto& t : {uniform_target(-1.0, 3.0), gaussian_target(2.0, 1.5)}) {
    // Monotonicity on random pairs.
    std::uniform_real_distribution<double> span(t.support_lo(), t.support_hi());
    for (int i = 0; i < 300; ++i) {
      double a = span(rng), b = span(rng);
      if (a > b) std::swap(a, b);
      CHECK(target_cdf(t, a) <= target_cdf(t, b));
    }
    // Central differences against the density at 100 interior points.
    for (int i = 0; i < 100; ++i) {
      const double f = t.support_lo() +
                       (t.support_hi() - t.support_lo()) * u01(rng);
      const double h = 1e-5 * (1.0 + std::fabs(f));
      if (f - h <= t.support_lo() || f + h >= t.support_hi()) continue;
      const double pdf = target_pdf(t, f);
      if (pdf < 1e-12) continue;
      if (t.family == TargetFamily::UniformInterval &&
          (std::fabs(f - t.lo) < 0.01 || std::fabs(f - t.hi) < 0.01))
        continue;  // kink at the interval ends
      const double fd = (target_cdf(t, f + h) - target_cdf(t, f - h)) / (2.0 * h);
      CHECK(fd == doctest::Approx(pdf).epsilon(1e-6));
    }
  }
}

TEST_CASE("spec validation rejects bad parameters") {
  BaseDistributionSpec bad = unit_square();
  bad.hi = {0.0, 1.0};  // lo == hi on the first axis
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  BaseDistributionSpec gauss;
  gauss.family = BaseFamily::IndependentGaussian;
  gauss.dimension = 2;
  gauss.mean = {0.0, 0.0};
  gauss.sigma = {1.0, -1.0};
  CHECK_THROWS_AS(gauss.validate(), ConfigError);

  TargetSpec t;
  t.family = TargetFamily::UniformInterval;
  t.lo = 2.0;
  t.hi = 2.0;
  CHECK_THROWS_AS(t.validate(), ConfigError);
}
