#include "tfode/solver.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "tfode/error.hpp"
#include "tfode/specfun.hpp"
#include "tfode/summation.hpp"

namespace tfode {

namespace {

constexpr double kDivergenceBound = 1e12;

struct Factors {
  double g1;     // h^alpha / Gamma(alpha+1)
  double g2;     // h^alpha / Gamma(alpha+2)
  double decay;  // e^{-lambda h}
};

Factors factors(const TemperedIVP& ivp, double h) {
  const double ha = std::pow(h, ivp.alpha());
  return {ha / gamma_fn(ivp.alpha() + 1.0), ha / gamma_fn(ivp.alpha() + 2.0),
          std::exp(-ivp.lambda() * h)};
}

double tn(long n, double h) { return static_cast<double>(n) * h; }

void check_step(const SolveHistory& hist, long n) {
  if (n < 1 || hist.x.size() < static_cast<std::size_t>(n) + 1 ||
      hist.f.size() < static_cast<std::size_t>(n) + 1) {
    throw ConfigError("step needs accepted states x_0..x_n with n >= 1");
  }
}

// sum_i w_i f(t_{n_i}, x_{n_i}) over the first `count` nodes
double history_sum(const std::vector<double>& w, const NodeSet& nodes, const SolveHistory& hist,
                   std::size_t count) {
  CompensatedSum s;
  for (std::size_t i = 0; i < count; ++i) {
    s += w[i] * hist.f[static_cast<std::size_t>(nodes.indices[i])];
  }
  return s.value();
}

}  // namespace

long step_count(double horizon, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw ConfigError("step length h must be positive and finite");
  }
  const double ratio = horizon / h;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, rounded)) {
    std::ostringstream os;
    os << "T/h = " << ratio << " is not a positive integer";
    throw ConfigError(os.str());
  }
  return static_cast<long>(rounded);
}

void validate_config(const TemperedIVP& ivp, const SolverConfig& cfg) {
  (void)step_count(ivp.horizon(), cfg.h);
  cfg.selector.validate();
  if (cfg.scheme == Scheme::single_form && ivp.alpha() > 1.0) {
    throw ConfigError("the single-kernel form requires alpha <= 1");
  }
  if (cfg.scheme == Scheme::diff_form && ivp.alpha() > 1.0 && !(ivp.lambda() > 0.0)) {
    throw ConfigError("the difference form requires lambda > 0 when alpha > 1");
  }
  if (cfg.scheme == Scheme::baseline && cfg.selector.kind != SelectorKind::full) {
    throw ConfigError("the baseline scheme always uses the full mesh");
  }
}

StepOutcome first_step(const TemperedIVP& ivp, double h, double f0) {
  const Factors k = factors(ivp, h);
  const double x0 = x0_eval(ivp, h);
  StepOutcome out;
  out.pred = x0 + k.g1 * k.decay * f0;
  out.f_pred = ivp.rhs(h, out.pred);
  out.corr = x0 + k.g2 * (out.f_pred + ivp.alpha() * k.decay * f0);
  return out;
}

StepOutcome step_single_form(const SolveHistory& hist, long n, const NodeSet& nodes,
                             const TemperedIVP& ivp, double h) {
  check_step(hist, n);
  if (nodes.target_step != n) {
    throw ConfigError("node set target step does not match n");
  }
  const Factors k = factors(ivp, h);
  const SingleWeights w = weights_single(nodes, ivp.alpha(), ivp.lambda(), h);
  const std::size_t m = nodes.size() - 1;
  const double head = history_sum(w.a.values, nodes, hist, m);
  const double fn = hist.f[static_cast<std::size_t>(n)];
  const double x0 = x0_eval(ivp, tn(n + 1, h));
  StepOutcome out;
  out.pred = x0 + k.g2 * (head + w.b_last * fn);
  out.f_pred = ivp.rhs(tn(n + 1, h), out.pred);
  out.corr = x0 + k.g2 * (head + w.a.values[m] * fn + out.f_pred);
  return out;
}

StepOutcome step_diff_form(const SolveHistory& hist, long n, const NodeSet& nodes,
                           const TemperedIVP& ivp, double h, WeightMode mode,
                           HistoryAnchor anchor) {
  check_step(hist, n);
  if (nodes.target_step != n) {
    throw ConfigError("node set target step does not match n");
  }
  const Factors k = factors(ivp, h);
  const WeightVector w = weights_diff(nodes, ivp.alpha(), ivp.lambda(), h, mode);
  double sum = history_sum(w.values, nodes, hist, nodes.size());
  const double fn = hist.f[static_cast<std::size_t>(n)];
  if (anchor == HistoryAnchor::predicted) {
    if (hist.f_pred.size() < static_cast<std::size_t>(n) + 1) {
      throw ConfigError("predicted anchor needs f at the predictors up to step n");
    }
    // Swap f(t_n, x_n) for f(t_n, x^P_n) in the t_n-kernel part of the last node.
    const double d = static_cast<double>(nodes.indices[nodes.size() - 1] - nodes.indices[nodes.size() - 2]);
    const double c_last = mode == WeightMode::literal
                              ? k.decay * (std::pow(d, ivp.alpha()) - 1.0)
                              : std::pow(d, ivp.alpha());
    sum -= c_last * (hist.f_pred[static_cast<std::size_t>(n)] - fn);
  }
  const double base = hist.x[static_cast<std::size_t>(n)] + x0_eval(ivp, tn(n + 1, h)) -
                      x0_eval(ivp, tn(n, h));
  const double a = ivp.alpha();
  StepOutcome out;
  out.pred = base + k.g2 * (sum + (a + 1.0) * k.decay * fn);
  out.f_pred = ivp.rhs(tn(n + 1, h), out.pred);
  out.corr = base + k.g2 * (sum + a * k.decay * fn + out.f_pred);
  return out;
}

StepOutcome step_baseline(const SolveHistory& hist, long n, const TemperedIVP& ivp, double h) {
  check_step(hist, n);
  const Factors k = factors(ivp, h);
  const WeightVector d = weights_full(n, ivp.alpha(), ivp.lambda(), h);
  CompensatedSum head;
  for (long i = 0; i < n; ++i) {
    head += d.values[static_cast<std::size_t>(i)] * hist.f[static_cast<std::size_t>(i)];
  }
  const double fn = hist.f[static_cast<std::size_t>(n)];
  const double b = k.decay * (std::pow(2.0, ivp.alpha() + 1.0) - 1.0);
  const double x0 = x0_eval(ivp, tn(n + 1, h));
  StepOutcome out;
  out.pred = x0 + k.g2 * (head.value() + b * fn);
  out.f_pred = ivp.rhs(tn(n + 1, h), out.pred);
  out.corr = x0 + k.g2 * (head.value() + d.values[static_cast<std::size_t>(n)] * fn + out.f_pred);
  return out;
}

namespace {

void guard(double v, long step, const char* what) {
  if (!std::isfinite(v) || std::abs(v) > kDivergenceBound) {
    std::ostringstream os;
    os << what << " diverged at step " << step << " (value " << v << ")";
    throw DivergenceError(os.str(), step);
  }
}

template <class Fn>
auto with_step(long step, Fn&& fn) {
  try {
    return fn();
  } catch (const DomainError& e) {
    std::ostringstream os;
    os << "rhs evaluation failed at step " << step << ": " << e.what();
    throw SolverError(os.str(), step);
  }
}

}  // namespace

SolveResult solve(const TemperedIVP& ivp, const SolverConfig& cfg) {
  validate_config(ivp, cfg);
  const long N = step_count(ivp.horizon(), cfg.h);
  const double h = cfg.h;
  const auto started = std::chrono::steady_clock::now();

  SolveResult res;
  SolveHistory hist;
  const std::size_t cap = static_cast<std::size_t>(N) + 1;
  hist.x.reserve(cap);
  hist.f.reserve(cap);
  hist.f_pred.reserve(cap);
  res.predictors.reserve(static_cast<std::size_t>(N));
  res.node_usage.per_step.reserve(static_cast<std::size_t>(N));

  const double c0 = ivp.init_coeffs()[0];
  const double f0 = with_step(0, [&] { return ivp.rhs(0.0, c0); });
  hist.x.push_back(c0);
  hist.f.push_back(f0);
  hist.f_pred.push_back(f0);
  long long evals = 1;

  const KernelForm form = cfg.scheme == Scheme::single_form ? KernelForm::single : KernelForm::diff;
  for (long n = 0; n < N; ++n) {
    StepOutcome out;
    long uses = 2;
    if (n == 0) {
      out = with_step(1, [&] { return first_step(ivp, h, f0); });
      if (cfg.record_nodes) {
        res.node_sets.push_back(NodeSet{{0}, 0, 0});
      }
    } else if (cfg.scheme == Scheme::baseline) {
      out = with_step(n + 1, [&] { return step_baseline(hist, n, ivp, h); });
      uses = n + 2;
      if (cfg.record_nodes) {
        res.node_sets.push_back(select_full(n));
      }
    } else {
      NodeSet nodes = select_nodes(form, cfg.selector, n, h, ivp.alpha(), ivp.lambda());
      out = with_step(n + 1, [&] {
        return cfg.scheme == Scheme::single_form
                   ? step_single_form(hist, n, nodes, ivp, h)
                   : step_diff_form(hist, n, nodes, ivp, h, cfg.weight_mode, cfg.anchor);
      });
      uses = static_cast<long>(nodes.size()) + 1;
      if (cfg.record_nodes) {
        res.node_sets.push_back(std::move(nodes));
      }
    }
    guard(out.pred, n + 1, "predictor");
    guard(out.corr, n + 1, "corrector");
    const double f_next = with_step(n + 1, [&] { return ivp.rhs(tn(n + 1, h), out.corr); });
    evals += 2;
    hist.x.push_back(out.corr);
    hist.f.push_back(f_next);
    hist.f_pred.push_back(out.f_pred);
    res.predictors.push_back(out.pred);
    res.node_usage.per_step.push_back(uses);
    res.node_usage.total += uses;
  }
  res.node_usage.distinct_evals = evals;
  res.values = std::move(hist.x);
  res.times.resize(cap);
  for (std::size_t j = 0; j < cap; ++j) {
    res.times[j] = static_cast<double>(j) * h;
  }
  res.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return res;
}

double recommended_delta(Scheme scheme, double alpha, double h) {
  if (!(alpha > 0.0 && alpha < 2.0) || !(h > 0.0)) {
    throw ConfigError("recommended_delta needs alpha in (0, 2) and h > 0");
  }
  if (scheme == Scheme::single_form) {
    if (alpha > 1.0) {
      throw ConfigError("the single-kernel form requires alpha <= 1");
    }
    if (alpha < 0.35) return 10.0 * h;
    if (alpha < 0.65) return 2.5 * h;
    return h;
  }
  if (alpha > 1.0) return 10.0 * h;
  if (alpha < 0.35) return h / 2.0;
  if (alpha < 0.65) return h / 10.0;
  return h / 50.0;
}

}  // namespace tfode
