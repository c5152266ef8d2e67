#include "tfode/specfun.hpp"

#include <cmath>
#include <sstream>

#include "tfode/error.hpp"
#include "tfode/summation.hpp"

namespace tfode {

namespace {

bool is_nonpositive_integer(double x) { return x <= 0.0 && std::floor(x) == x; }

// 1/Gamma(x), which is entire: zero at the poles of Gamma.
double reciprocal_gamma(double x) {
  if (is_nonpositive_integer(x)) {
    return 0.0;
  }
  if (x < 170.0) {
    return 1.0 / std::tgamma(x);
  }
  return std::exp(-std::lgamma(x));
}

}  // namespace

double gamma_fn(double x) {
  if (!std::isfinite(x)) {
    throw DomainError("gamma: non-finite argument");
  }
  if (is_nonpositive_integer(x)) {
    std::ostringstream os;
    os << "gamma: pole at " << x;
    throw DomainError(os.str());
  }
  return std::tgamma(x);
}

double mittag_leffler(const MLParams& p) {
  if (!(p.alpha > 0.0)) {
    throw ConfigError("mittag_leffler: alpha must be positive");
  }
  if (!(p.tol > 0.0)) {
    throw ConfigError("mittag_leffler: tol must be positive");
  }
  if (p.max_terms < 1) {
    throw ConfigError("mittag_leffler: max_terms must be positive");
  }

  const double log_abs_z = p.z != 0.0 ? std::log(std::abs(p.z)) : 0.0;
  CompensatedSum sum;
  double zpow = 1.0;
  int small_run = 0;
  for (int k = 0; k < p.max_terms; ++k) {
    const double arg = p.alpha * k + p.beta;
    double term = 0.0;
    if (std::abs(zpow) < 1e300 && arg < 170.0) {
      term = zpow * reciprocal_gamma(arg);
    } else if (!is_nonpositive_integer(arg)) {
      // z^k / Gamma(arg) in log space once either factor leaves double range.
      const double sign = (p.z < 0.0 && (k % 2 == 1)) ? -1.0 : 1.0;
      const double gsign = std::tgamma(arg) < 0.0 ? -1.0 : 1.0;
      term = sign * gsign * std::exp(k * log_abs_z - std::lgamma(arg));
    }
    if (!std::isfinite(term)) {
      break;
    }
    sum += term;
    if (std::abs(term) <= p.tol * std::abs(sum.value())) {
      if (++small_run == 2) {
        return sum.value();
      }
    } else {
      small_run = 0;
    }
    zpow *= p.z;
  }
  std::ostringstream os;
  os << "mittag_leffler: series for z=" << p.z << " did not converge within " << p.max_terms
     << " terms";
  throw ConvergenceError(os.str());
}

}  // namespace tfode
