/**
 * @file weights.hpp
 * @brief Product-trapezoid history weights for the single-kernel form, the
 *        full mesh and the difference form. All weights are in units of
 *        h^alpha / Gamma(alpha+2).
 */
#pragma once

#include <vector>

#include "tfode/mesh.hpp"

namespace tfode {

enum class WeightForm { single, diff, full };

/// How the difference-form weights are built. `derived` integrates both
/// kernels over the node panels directly. `literal` substitutes n for
/// n+1 in the single-kernel formula, including its boundary special case.
enum class WeightMode { derived, literal };

struct WeightVector {
  std::vector<double> values;  ///< aligned with NodeSet::indices
  WeightForm form = WeightForm::single;
  bool includes_last_bundle = false;  ///< last value carries alpha e^{-lambda h}
};

struct SingleWeights {
  WeightVector a;
  double b_last = 0.0;  ///< predictor weight on f(t_n, x_n): a_last + e^{-lambda h}
};

/// (1+x)^p - 1 - p x without cancellation, for x >= -1.
[[nodiscard]] double pow_remainder(double p, double x);

/// Product-trapezoid weights of the history integral
///   int_{t_start}^{t_n} e^{-lambda (t_K - tau)} (t_K - tau)^{alpha-1} g(tau) dtau
/// with g interpolated linearly between the nodes, for anchor index K >= n.
/// Multiply by h^alpha/Gamma(alpha+2) and Gamma(alpha) cancels against the
/// 1/Gamma(alpha) prefactor of the Volterra form.
[[nodiscard]] std::vector<double> history_weights(const NodeSet& nodes, long anchor, double alpha,
                                                  double lambda, double h);

/// Single-kernel corrector weights a_0..a_m (last one bundles alpha e^{-lambda h})
/// and the predictor weight b on f(t_n, x_n).
[[nodiscard]] SingleWeights weights_single(const NodeSet& nodes, double alpha, double lambda,
                                           double h);

/// Full-mesh corrector weights d_0..d_n from the closed form, evaluated
/// independently of history_weights.
[[nodiscard]] WeightVector weights_full(long n, double alpha, double lambda, double h);

/// Difference-form weights (a - c) on the nodes. In derived mode the
/// single-step terms are left out and the scheme adds them explicitly.
[[nodiscard]] WeightVector weights_diff(const NodeSet& nodes, double alpha, double lambda, double h,
                                        WeightMode mode = WeightMode::derived);

}  // namespace tfode
