#include "tfode/problem.hpp"

#include <cmath>
#include <sstream>

#include "tfode/error.hpp"
#include "tfode/specfun.hpp"

namespace tfode {

std::size_t required_coeff_count(double alpha) {
  return static_cast<std::size_t>(std::ceil(alpha));
}

TemperedIVP TemperedIVP::make(double alpha, double lambda, double horizon,
                              std::vector<double> init_coeffs, Rhs rhs) {
  if (!(alpha > 0.0 && alpha < 2.0)) {
    std::ostringstream os;
    os << "alpha must lie in (0, 2), got " << alpha;
    throw ConfigError(os.str());
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("lambda must be finite and non-negative");
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ConfigError("horizon must be finite and positive");
  }
  const std::size_t need = required_coeff_count(alpha);
  if (init_coeffs.size() != need) {
    std::ostringstream os;
    os << "alpha=" << alpha << " needs " << need << " initial coefficient(s), got "
       << init_coeffs.size();
    throw ConfigError(os.str());
  }
  for (double c : init_coeffs) {
    if (!std::isfinite(c)) {
      throw ConfigError("initial coefficients must be finite");
    }
  }
  if (!rhs) {
    throw ConfigError("rhs function is empty");
  }
  return TemperedIVP(alpha, lambda, horizon, std::move(init_coeffs), std::move(rhs));
}

TemperedIVP make_ivp(double alpha, double lambda, double horizon, std::vector<double> init_coeffs,
                     Rhs rhs) {
  return TemperedIVP::make(alpha, lambda, horizon, std::move(init_coeffs), std::move(rhs));
}

double x0_eval(const TemperedIVP& ivp, double t) {
  const auto c = ivp.init_coeffs();
  double poly = 0.0;
  double tk_over_kfact = 1.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    poly += c[k] * tk_over_kfact;
    tk_over_kfact *= t / static_cast<double>(k + 1);
  }
  return std::exp(-ivp.lambda() * t) * poly;
}

namespace {

std::pair<TemperedIVP, ExactSolution> example_smooth(double a, double l, double T) {
  const double g1 = gamma_fn(9.0) / gamma_fn(9.0 - a);
  const double g2 = 3.0 * gamma_fn(5.0 + a / 2.0) / gamma_fn(5.0 - a / 2.0);
  const double g3 = 2.25 * gamma_fn(a + 1.0);
  Rhs f = [=](double t, double x) {
    const double y = std::exp(l * t) * x;
    if (y < 0.0) {
      std::ostringstream os;
      os << "example 1 rhs: (e^{lambda t} x)^{3/2} undefined for e^{lambda t} x = " << y
         << " < 0 at t = " << t;
      throw DomainError(os.str());
    }
    const double s = 1.5 * std::pow(t, a / 2.0) - std::pow(t, 4.0);
    return std::exp(-l * t) * (g1 * std::pow(t, 8.0 - a) - g2 * std::pow(t, 4.0 - a / 2.0) + g3 +
                               s * s * s - y * std::sqrt(y));
  };
  std::vector<double> c(required_coeff_count(a), 0.0);
  ExactSolution exact{
      [=](double t) {
        return std::exp(-l * t) *
               (std::pow(t, 8.0) - 3.0 * std::pow(t, 4.0 + a / 2.0) + 2.25 * std::pow(t, a));
      },
      "exp(-lambda t) (t^8 - 3 t^(4+alpha/2) + 9/4 t^alpha)"};
  return {make_ivp(a, l, T, std::move(c), std::move(f)), std::move(exact)};
}

std::pair<TemperedIVP, ExactSolution> example_weak(double a, double l, double T) {
  const double k2 = 2.0 / gamma_fn(3.0 - a);
  Rhs f;
  std::vector<double> c;
  if (a > 1.0) {
    f = [=](double t, double x) {
      return std::exp(-l * t) *
             (k2 * std::pow(t, 2.0 - a) - std::exp(l * t) * x + t * t - t);
    };
    c = {0.0, -1.0};
  } else {
    const double k1 = 1.0 / gamma_fn(2.0 - a);
    f = [=](double t, double x) {
      return std::exp(-l * t) * (k2 * std::pow(t, 2.0 - a) - k1 * std::pow(t, 1.0 - a) -
                                 std::exp(l * t) * x + t * t - t);
    };
    c = {0.0};
  }
  ExactSolution exact{[=](double t) { return std::exp(-l * t) * (t * t - t); },
                      "exp(-lambda t) (t^2 - t)"};
  return {make_ivp(a, l, T, std::move(c), std::move(f)), std::move(exact)};
}

std::pair<TemperedIVP, ExactSolution> example_relaxation(double a, double l, double T) {
  Rhs f = [](double, double x) { return -x; };
  std::vector<double> c(required_coeff_count(a), 0.0);
  c[0] = 1.0;
  ExactSolution exact{[=](double t) {
                        return std::exp(-l * t) *
                               mittag_leffler({.alpha = a, .beta = 1.0, .z = -std::pow(t, a)});
                      },
                      "exp(-lambda t) E_{alpha,1}(-t^alpha)"};
  return {make_ivp(a, l, T, std::move(c), std::move(f)), std::move(exact)};
}

}  // namespace

std::pair<TemperedIVP, ExactSolution> builtin_example(int id, double alpha, double lambda,
                                                      double horizon) {
  if (!(alpha > 0.0 && alpha < 2.0)) {
    // Checked up front so the gamma prefactors below never see a pole.
    std::ostringstream os;
    os << "alpha must lie in (0, 2), got " << alpha;
    throw ConfigError(os.str());
  }
  switch (id) {
    case 1:
      return example_smooth(alpha, lambda, horizon);
    case 2:
      return example_weak(alpha, lambda, horizon);
    case 3:
      return example_relaxation(alpha, lambda, horizon);
    default: {
      std::ostringstream os;
      os << "unknown built-in example " << id << " (expected 1, 2 or 3)";
      throw ConfigError(os.str());
    }
  }
}

}  // namespace tfode
