#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "maxent/numeric.hpp"

using namespace maxent;

TEST_CASE("norm_quantile inverts the erf-based CDF") {
  // Independent oracle: Phi(z) = (1 + erf(z/sqrt(2))) / 2.
  auto phi = [](double z) { return 0.5 * (1.0 + std::erf(z / std::sqrt(2.0))); };

  CHECK(norm_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(norm_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(norm_quantile(0.8413447460685429) == doctest::Approx(1.0).epsilon(1e-12));

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double p = unif(rng);
    const double z = norm_quantile(p);
    CHECK(phi(z) == doctest::Approx(p).epsilon(1e-12));
  }
  // Deep tails.
  for (double p : {1e-12, 1e-9, 1e-6, 1.0 - 1e-6, 1.0 - 1e-9}) {
    const double z = norm_quantile(p);
    CHECK(norm_cdf(z) == doctest::Approx(p).epsilon(1e-10));
    CHECK(norm_quantile(1.0 - p) == doctest::Approx(-z).epsilon(1e-10));
  }
  CHECK(std::isinf(norm_quantile(0.0)));
  CHECK(std::isinf(norm_quantile(1.0)));
  CHECK_THROWS(norm_quantile(-0.1));
  CHECK_THROWS(norm_quantile(1.1));
}

TEST_CASE("kahan summation survives adversarial ordering") {
  std::vector<double> values;
  values.push_back(1.0);
  for (int i = 0; i < 10000; ++i) values.push_back(1e-16);
  const double total = kahan_total(values);
  CHECK(total == doctest::Approx(1.0 + 1e-12).epsilon(1e-14));
}

TEST_CASE("quantile_sorted interpolates order statistics") {
  std::vector<double> v{1.0, 2.0, 3.0, 4.0, 5.0};
  CHECK(quantile_sorted(v, 0.0) == 1.0);
  CHECK(quantile_sorted(v, 1.0) == 5.0);
  CHECK(quantile_sorted(v, 0.5) == 3.0);
  CHECK(quantile_sorted(v, 0.25) == 2.0);
  CHECK(quantile_sorted(v, 0.625) == doctest::Approx(3.5));
}

TEST_CASE("double formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 2.0, 1e300, 5e-324, 123456.789}) {
    CHECK(std::stod(format_double(v)) == v);
    CHECK(std::stod(format_double_shortest(v)) == v);
  }
}

TEST_CASE("fnv1a64 distinguishes close strings") {
  CHECK(fnv1a64("a") != fnv1a64("b"));
  CHECK(fnv1a64("") == 1469598103934665603ull);
}
