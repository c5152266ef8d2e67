/**
 * @file specfun.hpp
 * @brief Gamma and generalized Mittag-Leffler functions for real arguments.
 */
#pragma once

namespace tfode {

/// Gamma function. Throws DomainError at the poles (non-positive integers)
/// and for non-finite input.
[[nodiscard]] double gamma_fn(double x);

struct MLParams {
  double alpha = 1.0;
  double beta = 1.0;
  double z = 0.0;
  /// Relative stopping tolerance on the term magnitude.
  double tol = 1e-15;
  int max_terms = 10000;
};

/// E_{alpha,beta}(z) = sum_k z^k / Gamma(alpha k + beta), summed term by term.
///
/// Summation stops once two consecutive terms fall below tol * |partial sum|.
/// Intended for moderate |z| (up to a few tens); larger arguments lose
/// accuracy to cancellation long before max_terms is exhausted.
///
/// Throws ConfigError for alpha <= 0 or tol <= 0, ConvergenceError if the
/// stopping rule is not met within max_terms.
[[nodiscard]] double mittag_leffler(const MLParams& p);

}  // namespace tfode
