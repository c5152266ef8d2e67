#include "tfode/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tfode/error.hpp"

namespace tfode {

KernelContext KernelContext::at_step(long n, double h, double alpha, double lambda) {
  const double t_cur = static_cast<double>(n) * h;
  return KernelContext{t_cur + h, t_cur, alpha, lambda, h};
}

namespace {

double tempered_power(double lag, double alpha, double lambda) {
  return std::exp(-lambda * lag) * std::pow(lag, alpha - 1.0);
}

}  // namespace

double kernel_single(const KernelContext& ctx, double tau) {
  if (!std::isfinite(tau) || !(tau < ctx.t_next)) {
    std::ostringstream os;
    os << "kernel_single: tau=" << tau << " must be below t_next=" << ctx.t_next;
    throw DomainError(os.str());
  }
  return tempered_power(ctx.t_next - tau, ctx.alpha, ctx.lambda);
}

double kernel_diff(const KernelContext& ctx, double tau) {
  if (!std::isfinite(tau) || !(tau < ctx.t_cur)) {
    std::ostringstream os;
    os << "kernel_diff: tau=" << tau << " must be below t_cur=" << ctx.t_cur;
    throw DomainError(os.str());
  }
  return tempered_power(ctx.t_next - tau, ctx.alpha, ctx.lambda) -
         tempered_power(ctx.t_cur - tau, ctx.alpha, ctx.lambda);
}

double positive_region_start(const KernelContext& ctx) {
  if (!(ctx.alpha > 1.0)) {
    throw DomainError("positive_region_start: the difference kernel has no positive region for alpha <= 1");
  }
  if (!(ctx.lambda > 0.0)) {
    throw DomainError("positive_region_start: undefined for lambda <= 0");
  }
  return std::max(0.0, ctx.t_next - (ctx.alpha - 1.0) / ctx.lambda);
}

}  // namespace tfode
