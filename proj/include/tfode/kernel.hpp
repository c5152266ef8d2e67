/**
 * @file kernel.hpp
 * @brief Memory kernels of the two Volterra forms and the sign switch point
 *        of the difference kernel.
 */
#pragma once

namespace tfode {

/// Step context for kernel evaluation. t_next = t_cur + h.
struct KernelContext {
  double t_next;
  double t_cur;
  double alpha;
  double lambda;
  double h;

  /// Builds the context for target step n+1 on a uniform grid with step h.
  static KernelContext at_step(long n, double h, double alpha, double lambda);
};

/// y(tau) = e^{-lambda (t_next - tau)} (t_next - tau)^{alpha-1}.
/// Throws DomainError when tau >= t_next or tau is not finite.
[[nodiscard]] double kernel_single(const KernelContext& ctx, double tau);

/// Difference kernel: the single kernel at t_next minus the same kernel at t_cur.
/// Throws DomainError when tau >= t_cur or tau is not finite.
[[nodiscard]] double kernel_diff(const KernelContext& ctx, double tau);

/// max(0, t_next - (alpha-1)/lambda). Past this point the difference kernel
/// is positive. Throws DomainError when alpha <= 1 or lambda <= 0.
[[nodiscard]] double positive_region_start(const KernelContext& ctx);

}  // namespace tfode
