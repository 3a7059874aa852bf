#include "maxent/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "maxent/error.hpp"
#include "maxent/numeric.hpp"

namespace maxent {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(sqrt(2*pi))
constexpr double kGaussianSupportSigmas = 8.5;

void require(bool cond, const std::string& msg) {
  if (!cond) throw ConfigError(msg);
}

}  // namespace

void BaseDistributionSpec::validate() const {
  require(dimension >= 1, "base.dimension must be >= 1");
  if (family == BaseFamily::UniformBox) {
    require(lo.size() == static_cast<std::size_t>(dimension) &&
                hi.size() == static_cast<std::size_t>(dimension),
            "base.lo/base.hi must have length equal to base.dimension");
    for (int k = 0; k < dimension; ++k) {
      require(std::isfinite(lo[k]) && std::isfinite(hi[k]), "base bounds must be finite");
      require(lo[k] < hi[k], "base.lo[k] must be < base.hi[k]");
    }
  } else {
    require(mean.size() == static_cast<std::size_t>(dimension) &&
                sigma.size() == static_cast<std::size_t>(dimension),
            "base.mean/base.sigma must have length equal to base.dimension");
    for (int k = 0; k < dimension; ++k) {
      require(std::isfinite(mean[k]) && std::isfinite(sigma[k]),
              "base parameters must be finite");
      require(sigma[k] > 0.0, "base.sigma[k] must be > 0");
    }
  }
}

std::string BaseDistributionSpec::describe() const {
  std::ostringstream os;
  switch (family) {
    case BaseFamily::UniformBox:
      os << "uniform_box(d=" << dimension;
      for (int k = 0; k < dimension; ++k)
        os << ",[" << format_double(lo[k]) << "," << format_double(hi[k]) << "]";
      break;
    case BaseFamily::IndependentGaussian:
      os << "independent_gaussian(d=" << dimension;
      for (int k = 0; k < dimension; ++k)
        os << ",N(" << format_double(mean[k]) << "," << format_double(sigma[k]) << ")";
      break;
    case BaseFamily::GaussianOnLog:
      os << "gaussian_on_log(d=" << dimension;
      for (int k = 0; k < dimension; ++k)
        os << ",logN(" << format_double(mean[k]) << "," << format_double(sigma[k]) << ")";
      break;
  }
  os << ")";
  return os.str();
}

std::uint64_t BaseDistributionSpec::hash() const { return fnv1a64(describe()); }

double base_log_density(const BaseDistributionSpec& spec, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(spec.dimension))
    throw ConfigError("base_log_density: point dimension mismatch");
  for (double v : x)
    if (!std::isfinite(v)) throw ConfigError("base_log_density: non-finite input");

  switch (spec.family) {
    case BaseFamily::UniformBox: {
      double logp = 0.0;
      for (int k = 0; k < spec.dimension; ++k) {
        if (x[k] < spec.lo[k] || x[k] >= spec.hi[k]) return -kInf;
        logp -= std::log(spec.hi[k] - spec.lo[k]);
      }
      return logp;
    }
    case BaseFamily::IndependentGaussian: {
      double logp = 0.0;
      for (int k = 0; k < spec.dimension; ++k) {
        const double z = (x[k] - spec.mean[k]) / spec.sigma[k];
        logp += -0.5 * z * z - std::log(spec.sigma[k]) - kLogSqrt2Pi;
      }
      return logp;
    }
    case BaseFamily::GaussianOnLog: {
      // Density of the log-variable evaluated at log(x); no Jacobian.
      double logp = 0.0;
      for (int k = 0; k < spec.dimension; ++k) {
        if (x[k] <= 0.0) return -kInf;
        const double z = (std::log(x[k]) - spec.mean[k]) / spec.sigma[k];
        logp += -0.5 * z * z - std::log(spec.sigma[k]) - kLogSqrt2Pi;
      }
      return logp;
    }
  }
  throw Error("unreachable base family");
}

void TargetSpec::validate() const {
  if (family == TargetFamily::UniformInterval) {
    require(std::isfinite(lo) && std::isfinite(hi), "target bounds must be finite");
    require(lo < hi, "target.lo must be < target.hi");
  } else {
    require(std::isfinite(mean) && std::isfinite(sigma), "target parameters must be finite");
    require(sigma > 0.0, "target.sigma must be > 0");
  }
}

double TargetSpec::support_lo() const {
  switch (family) {
    case TargetFamily::UniformInterval: return lo;
    case TargetFamily::Gaussian: return mean - kGaussianSupportSigmas * sigma;
    case TargetFamily::GaussianOnLog:
      return std::exp(mean - kGaussianSupportSigmas * sigma);
  }
  throw Error("unreachable target family");
}

double TargetSpec::support_hi() const {
  switch (family) {
    case TargetFamily::UniformInterval: return hi;
    case TargetFamily::Gaussian: return mean + kGaussianSupportSigmas * sigma;
    case TargetFamily::GaussianOnLog:
      return std::exp(mean + kGaussianSupportSigmas * sigma);
  }
  throw Error("unreachable target family");
}

std::string TargetSpec::describe() const {
  std::ostringstream os;
  switch (family) {
    case TargetFamily::UniformInterval:
      os << "uniform_interval[" << format_double(lo) << "," << format_double(hi) << "]";
      break;
    case TargetFamily::Gaussian:
      os << "gaussian(" << format_double(mean) << "," << format_double(sigma) << ")";
      break;
    case TargetFamily::GaussianOnLog:
      os << "gaussian_on_log(" << format_double(mean) << "," << format_double(sigma) << ")";
      break;
  }
  return os.str();
}

double target_pdf(const TargetSpec& t, double f) {
  if (!std::isfinite(f)) throw ConfigError("target_pdf: non-finite argument");
  switch (t.family) {
    case TargetFamily::UniformInterval:
      return (f >= t.lo && f <= t.hi) ? 1.0 / (t.hi - t.lo) : 0.0;
    case TargetFamily::Gaussian: {
      if (f < t.support_lo() || f > t.support_hi()) return 0.0;
      return norm_pdf((f - t.mean) / t.sigma) / t.sigma;
    }
    case TargetFamily::GaussianOnLog: {
      if (f <= 0.0 || f < t.support_lo() || f > t.support_hi()) return 0.0;
      const double z = (std::log(f) - t.mean) / t.sigma;
      return norm_pdf(z) / (f * t.sigma);
    }
  }
  throw Error("unreachable target family");
}

double target_cdf(const TargetSpec& t, double f) {
  if (!std::isfinite(f)) throw ConfigError("target_cdf: non-finite argument");
  switch (t.family) {
    case TargetFamily::UniformInterval: {
      if (f <= t.lo) return 0.0;
      if (f >= t.hi) return 1.0;
      return (f - t.lo) / (t.hi - t.lo);
    }
    case TargetFamily::Gaussian: {
      if (f <= t.support_lo()) return 0.0;
      if (f >= t.support_hi()) return 1.0;
      return norm_cdf((f - t.mean) / t.sigma);
    }
    case TargetFamily::GaussianOnLog: {
      if (f <= t.support_lo()) return 0.0;
      if (f >= t.support_hi()) return 1.0;
      return norm_cdf((std::log(f) - t.mean) / t.sigma);
    }
  }
  throw Error("unreachable target family");
}

}  // namespace maxent
