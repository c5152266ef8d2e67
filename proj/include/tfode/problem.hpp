/**
 * @file problem.hpp
 * @brief Tempered fractional initial value problems and the built-in
 *        benchmark examples with known exact solutions.
 *
 * The problem is D^{alpha,lambda} x(t) = f(t, x(t)) on (0, T] with the
 * tempered Caputo derivative D^{alpha,lambda} u = e^{-lambda t} D^alpha
 * (e^{lambda t} u), and initial data d^k/dt^k [e^{lambda t} x(t)] at t = 0
 * equal to c_k for k < ceil(alpha).
 */
#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tfode {

/// Right-hand side f(t, x). Must be free of observable side effects; the
/// solver may call it from any thread and caches its results.
using Rhs = std::function<double(double t, double x)>;

class TemperedIVP {
 public:
  /// Validates and builds a problem. Throws ConfigError when alpha is
  /// outside (0, 2), lambda < 0, horizon <= 0, the coefficient count is not
  /// ceil(alpha), or rhs is empty.
  static TemperedIVP make(double alpha, double lambda, double horizon,
                          std::vector<double> init_coeffs, Rhs rhs);

  [[nodiscard]] double alpha() const noexcept { return alpha_; }
  [[nodiscard]] double lambda() const noexcept { return lambda_; }
  [[nodiscard]] double horizon() const noexcept { return horizon_; }
  [[nodiscard]] std::span<const double> init_coeffs() const noexcept { return init_coeffs_; }

  [[nodiscard]] double rhs(double t, double x) const { return rhs_(t, x); }
  [[nodiscard]] const Rhs& rhs_function() const noexcept { return rhs_; }

 private:
  TemperedIVP(double alpha, double lambda, double horizon, std::vector<double> init_coeffs, Rhs rhs)
      : alpha_(alpha),
        lambda_(lambda),
        horizon_(horizon),
        init_coeffs_(std::move(init_coeffs)),
        rhs_(std::move(rhs)) {}

  double alpha_;
  double lambda_;
  double horizon_;
  std::vector<double> init_coeffs_;
  Rhs rhs_;
};

/// Convenience alias for TemperedIVP::make.
[[nodiscard]] TemperedIVP make_ivp(double alpha, double lambda, double horizon,
                                   std::vector<double> init_coeffs, Rhs rhs);

/// Number of initial coefficients required for order alpha: ceil(alpha).
[[nodiscard]] std::size_t required_coeff_count(double alpha);

/// Initial-history term x_0(t) = sum_k c_k e^{-lambda t} t^k / k!.
[[nodiscard]] double x0_eval(const TemperedIVP& ivp, double t);

struct ExactSolution {
  std::function<double(double)> value;
  std::string description;
};

/// Built-in benchmark problems:
///  1: smooth Caputo derivative, exact e^{-lt}(t^8 - 3 t^{4+a/2} + 9/4 t^a),
///     rhs with a (e^{lt} x)^{3/2} nonlinearity;
///  2: weakly regular rhs, exact e^{-lt}(t^2 - t);
///  3: relaxation f = -x, exact e^{-lt} E_{a,1}(-t^a).
/// The exact solution is for error measurement only. Throws ConfigError for
/// an unknown id or invalid parameters.
[[nodiscard]] std::pair<TemperedIVP, ExactSolution> builtin_example(int id, double alpha,
                                                                    double lambda, double horizon);

}  // namespace tfode
