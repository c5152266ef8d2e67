#include "tfode/weights.hpp"

#include <cmath>

#include "tfode/error.hpp"

namespace tfode {

double pow_remainder(double p, double x) {
  if (std::abs(x) <= 0.125) {
    // sum_{k>=2} binom(p,k) x^k
    double coeff = p * (p - 1.0) / 2.0;
    double xk = x * x;
    double sum = 0.0;
    for (int k = 2; k < 60; ++k) {
      const double term = coeff * xk;
      sum += term;
      if (std::abs(term) <= 1e-18 * std::abs(sum)) {
        break;
      }
      coeff *= (p - k) / (k + 1.0);
      xk *= x;
    }
    return sum;
  }
  return std::expm1(p * std::log1p(x)) - p * x;
}

namespace {

void check_params(double alpha, double lambda, double h) {
  if (!(alpha > 0.0 && alpha < 2.0)) {
    throw ConfigError("alpha must lie in (0, 2)");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("lambda must be finite and non-negative");
  }
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw ConfigError("h must be positive and finite");
  }
}

void check_nodes(const NodeSet& nodes) {
  nodes.validate();
  if (nodes.size() < 2) {
    throw ConfigError("weights need at least two nodes (n >= 1)");
  }
}

}  // namespace

std::vector<double> history_weights(const NodeSet& nodes, long anchor, double alpha, double lambda,
                                    double h) {
  check_nodes(nodes);
  if (anchor < nodes.target_step) {
    throw ConfigError("history weight anchor must not precede the last node");
  }
  const double p = alpha + 1.0;
  const double K = static_cast<double>(anchor);
  std::vector<double> w(nodes.size(), 0.0);
  for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
    const double lo = static_cast<double>(nodes.indices[j]);
    const double hi = static_cast<double>(nodes.indices[j + 1]);
    const double d = hi - lo;
    const double A = K - lo;
    const double B = K - hi;
    // Upper node: (A^p - B^p - p d B^alpha)/d; lower node: (B^p - A^p + p d A^alpha)/d.
    const double upper = B > 0.0 ? std::pow(B, p) * pow_remainder(p, d / B) / d : std::pow(d, alpha);
    const double lower = std::pow(A, p) * pow_remainder(p, -d / A) / d;
    w[j + 1] += upper;
    w[j] += lower;
  }
  for (std::size_t j = 0; j < w.size(); ++j) {
    w[j] *= std::exp(-lambda * (K - static_cast<double>(nodes.indices[j])) * h);
  }
  return w;
}

SingleWeights weights_single(const NodeSet& nodes, double alpha, double lambda, double h) {
  check_params(alpha, lambda, h);
  check_nodes(nodes);
  if (nodes.start_index != 0) {
    throw ConfigError("single-kernel weights need a node set starting at 0");
  }
  SingleWeights out;
  out.a.form = WeightForm::single;
  out.a.includes_last_bundle = true;
  out.a.values = history_weights(nodes, nodes.target_step + 1, alpha, lambda, h);
  const double decay = std::exp(-lambda * h);
  out.a.values.back() += alpha * decay;
  out.b_last = out.a.values.back() + decay;
  return out;
}

namespace {

// (B-1)^p - 2 B^p + (B+1)^p for B >= 1.
double second_difference(double B, double p) {
  if (B < 16.0) {
    return std::pow(B - 1.0, p) - 2.0 * std::pow(B, p) + std::pow(B + 1.0, p);
  }
  // B^p * 2 * sum_{k even >= 2} binom(p,k) B^{-k}
  const double x2 = 1.0 / (B * B);
  double coeff = p * (p - 1.0) / 2.0;
  double xk = x2;
  double sum = 0.0;
  for (int k = 2; k < 80; k += 2) {
    const double term = coeff * xk;
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) {
      break;
    }
    coeff *= (p - k) * (p - k - 1.0) / ((k + 1.0) * (k + 2.0));
    xk *= x2;
  }
  return 2.0 * std::pow(B, p) * sum;
}

}  // namespace

WeightVector weights_full(long n, double alpha, double lambda, double h) {
  check_params(alpha, lambda, h);
  if (n < 1) {
    throw ConfigError("weights_full needs n >= 1");
  }
  const double p = alpha + 1.0;
  WeightVector out;
  out.form = WeightForm::full;
  out.includes_last_bundle = true;
  out.values.resize(static_cast<std::size_t>(n) + 1);
  const double A = static_cast<double>(n + 1);
  // d_0 = n^p - (n+1)^alpha (n - alpha) = A^p R(p, -1/A)
  out.values[0] = std::exp(-lambda * A * h) * std::pow(A, p) * pow_remainder(p, -1.0 / A);
  for (long i = 1; i <= n; ++i) {
    const double B = static_cast<double>(n + 1 - i);
    out.values[static_cast<std::size_t>(i)] = std::exp(-lambda * B * h) * second_difference(B, p);
  }
  return out;
}

WeightVector weights_diff(const NodeSet& nodes, double alpha, double lambda, double h,
                          WeightMode mode) {
  check_params(alpha, lambda, h);
  check_nodes(nodes);
  const long n = nodes.target_step;
  std::vector<double> a = history_weights(nodes, n + 1, alpha, lambda, h);
  std::vector<double> c = history_weights(nodes, n, alpha, lambda, h);
  WeightVector out;
  out.form = WeightForm::diff;
  if (mode == WeightMode::literal) {
    const double decay = std::exp(-lambda * h);
    const double d = static_cast<double>(nodes.indices.back() - nodes.indices[nodes.size() - 2]);
    a.back() += alpha * decay;
    c.back() = decay * (std::pow(d, alpha) - 1.0);
    out.includes_last_bundle = true;
  }
  out.values.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.values[i] = a[i] - c[i];
  }
  return out;
}

}  // namespace tfode
