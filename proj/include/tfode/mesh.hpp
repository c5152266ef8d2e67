/**
 * @file mesh.hpp
 * @brief History node selection on the uniform grid: the full mesh and the
 *        equal-height / equal-area equidistributing selectors for both
 *        kernel forms.
 *
 * All node positions are grid indices; tau = index * h.
 */
#pragma once

#include <iosfwd>
#include <vector>

namespace tfode {

/// Selected history nodes for target step n+1 (the history covers
/// [t_start, t_n]).
struct NodeSet {
  std::vector<long> indices;
  long target_step = 0;
  long start_index = 0;

  /// Throws ConfigError if an invariant fails: non-empty, strictly
  /// increasing, first == start_index, last == target_step, all within
  /// [start_index, target_step].
  void validate() const;

  [[nodiscard]] std::size_t size() const noexcept { return indices.size(); }
};

enum class SelectorKind { full, equal_height, equal_area };

/// Which kernel the selection targets: the single kernel at t_{n+1} or the
/// difference of the kernels at t_{n+1} and t_n.
enum class KernelForm { single, diff };

/// Reading of the single-kernel equal-height advance. `derived` uses the
/// first-order Taylor step with the (t_{n+1}-tau)^{2-alpha} factor;
/// `printed` takes the exponent as printed, e^{lambda a^2}, without it.
enum class HeightReading { derived, printed };

struct SelectorConfig {
  SelectorKind kind = SelectorKind::full;
  double delta = 0.0;  ///< dy for equal_height, ds for equal_area (absolute)
  HeightReading height_reading = HeightReading::derived;

  /// Throws ConfigError when delta is not a positive finite number for a
  /// non-full selector.
  void validate() const;
};

/// [0, 1, ..., n]. Throws ConfigError when n < 1.
[[nodiscard]] NodeSet select_full(long n);

/// Equal-height selection for the single kernel, 0 < alpha <= 1.
[[nodiscard]] NodeSet select_height_single(long n, double h, double alpha, double lambda, double dy,
                                           HeightReading reading = HeightReading::derived);

/// Equal-area selection for the single kernel, 0 < alpha <= 1.
[[nodiscard]] NodeSet select_area_single(long n, double h, double alpha, double lambda, double ds);

/// Equal-height selection for the difference kernel. For alpha > 1 the
/// selection starts at the floored positive-region start and everything
/// before it is dropped.
[[nodiscard]] NodeSet select_height_diff(long n, double h, double alpha, double lambda, double dy);

/// Equal-area selection for the difference kernel.
[[nodiscard]] NodeSet select_area_diff(long n, double h, double alpha, double lambda, double ds);

/// Grid index where the difference-form history starts: 0 for alpha <= 1,
/// else floor(t_{n+1} - (alpha-1)/lambda)/h clamped to [0, n-1].
[[nodiscard]] long diff_start_index(long n, double h, double alpha, double lambda);

/// Dispatches on form and selector kind.
[[nodiscard]] NodeSet select_nodes(KernelForm form, const SelectorConfig& cfg, long n, double h,
                                   double alpha, double lambda);

/// Writes `step,node_index,node_time[,kernel_value]` rows for each node set,
/// with step = target_step + 1. kernel_value is left empty where the kernel
/// is singular (the last node of the difference kernel).
void write_nodes_csv(std::ostream& os, const std::vector<NodeSet>& sets, double h, double alpha,
                     double lambda, KernelForm form, bool with_kernel);

}  // namespace tfode
