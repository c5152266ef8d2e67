#include "tfode/mesh.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "tfode/error.hpp"
#include "tfode/kernel.hpp"

namespace tfode {

void NodeSet::validate() const {
  std::ostringstream os;
  if (indices.empty()) {
    os << "node set for step " << target_step << " is empty";
  } else if (indices.front() != start_index) {
    os << "first node " << indices.front() << " differs from start index " << start_index;
  } else if (indices.back() != target_step) {
    os << "last node " << indices.back() << " differs from target step " << target_step;
  } else if (start_index < 0) {
    os << "negative start index " << start_index;
  } else {
    for (std::size_t i = 1; i < indices.size(); ++i) {
      if (indices[i] <= indices[i - 1]) {
        os << "node indices not strictly increasing at position " << i;
        break;
      }
    }
  }
  const std::string msg = os.str();
  if (!msg.empty()) {
    throw ConfigError(msg);
  }
}

void SelectorConfig::validate() const {
  if (kind != SelectorKind::full && !(delta > 0.0 && std::isfinite(delta))) {
    throw ConfigError("selector delta must be positive and finite");
  }
}

namespace {

void check_common(long n, double h, double alpha, double delta) {
  if (n < 1) {
    throw ConfigError("node selection needs n >= 1");
  }
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw ConfigError("step length h must be positive and finite");
  }
  if (!(alpha > 0.0 && alpha < 2.0)) {
    throw ConfigError("alpha must lie in (0, 2)");
  }
  if (!(delta > 0.0) || std::isnan(delta)) {
    throw ConfigError("selector delta must be positive");
  }
}

void check_single(long n, double h, double alpha, double delta) {
  check_common(n, h, alpha, delta);
  if (alpha > 1.0) {
    throw ConfigError("single-kernel selectors require alpha <= 1");
  }
}

void check_diff(long n, double h, double alpha, double lambda, double delta) {
  check_common(n, h, alpha, delta);
  if (!(lambda >= 0.0)) {
    throw ConfigError("lambda must be non-negative");
  }
  if (alpha > 1.0 && !(lambda > 0.0)) {
    throw ConfigError("difference-form selection with alpha > 1 needs lambda > 0");
  }
}

// Walks the grid from `start` to n. `advance(cur)` returns the proposed
// continuous step dtau from node cur. Steps shorter than h are clamped to
// one grid cell, longer ones are floored to the grid, and anything that
// passes t_n (including overflow) ends at n.
template <class Advance>
NodeSet walk(long n, double h, long start, Advance advance) {
  NodeSet out;
  out.target_step = n;
  out.start_index = start;
  out.indices.push_back(start);
  long cur = start;
  while (cur < n) {
    const double adv = advance(cur) / h;
    const double room = static_cast<double>(n - cur);
    if (std::isnan(adv) || adv < 1.0) {
      cur += 1;
    } else if (adv > room) {
      cur = n;
    } else {
      cur += static_cast<long>(std::floor(adv + 1e-9));
    }
    out.indices.push_back(cur);
  }
  return out;
}

}  // namespace

NodeSet select_full(long n) {
  if (n < 1) {
    throw ConfigError("node selection needs n >= 1");
  }
  NodeSet out;
  out.target_step = n;
  out.start_index = 0;
  out.indices.resize(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) {
    out.indices[static_cast<std::size_t>(i)] = i;
  }
  return out;
}

NodeSet select_height_single(long n, double h, double alpha, double lambda, double dy,
                             HeightReading reading) {
  check_single(n, h, alpha, dy);
  const double t_next = static_cast<double>(n + 1) * h;
  if (reading == HeightReading::printed) {
    return walk(n, h, 0, [&](long cur) {
      const double a = t_next - static_cast<double>(cur) * h;
      return dy * std::exp(lambda * a * a) / ((1.0 - alpha) + lambda * a);
    });
  }
  return walk(n, h, 0, [&](long cur) {
    const double a = t_next - static_cast<double>(cur) * h;
    return dy * std::exp(lambda * a) * std::pow(a, 2.0 - alpha) / ((1.0 - alpha) + lambda * a);
  });
}

NodeSet select_area_single(long n, double h, double alpha, double lambda, double ds) {
  check_single(n, h, alpha, ds);
  const double t_next = static_cast<double>(n + 1) * h;
  return walk(n, h, 0, [&](long cur) {
    const double a = t_next - static_cast<double>(cur) * h;
    return ds * std::pow(a, 1.0 - alpha) * std::exp(lambda * a);
  });
}

long diff_start_index(long n, double h, double alpha, double lambda) {
  if (alpha <= 1.0) {
    return 0;
  }
  const double s = static_cast<double>(n + 1) - (alpha - 1.0) / (lambda * h);
  if (!(s > 0.0)) {
    return 0;
  }
  const long start = static_cast<long>(std::floor(s + 1e-9));
  return std::min(start, n - 1);
}

NodeSet select_height_diff(long n, double h, double alpha, double lambda, double dy) {
  check_diff(n, h, alpha, lambda, dy);
  const double t_next = static_cast<double>(n + 1) * h;
  const double t_cur = static_cast<double>(n) * h;
  const double signed_dy = alpha <= 1.0 ? -dy : dy;
  const double growth = std::exp(lambda * h);
  const auto slope = [&](double lag) {
    return lambda * std::pow(lag, alpha - 1.0) - (alpha - 1.0) * std::pow(lag, alpha - 2.0);
  };
  return walk(n, h, diff_start_index(n, h, alpha, lambda), [&](long cur) {
    const double tau = static_cast<double>(cur) * h;
    const double a = t_next - tau;
    const double b = t_cur - tau;
    return signed_dy * std::exp(lambda * a) / (slope(a) - growth * slope(b));
  });
}

NodeSet select_area_diff(long n, double h, double alpha, double lambda, double ds) {
  check_diff(n, h, alpha, lambda, ds);
  const double t_next = static_cast<double>(n + 1) * h;
  const double t_cur = static_cast<double>(n) * h;
  const double signed_ds = alpha <= 1.0 ? -ds : ds;
  const double growth = std::exp(lambda * h);
  return walk(n, h, diff_start_index(n, h, alpha, lambda), [&](long cur) {
    const double tau = static_cast<double>(cur) * h;
    const double a = t_next - tau;
    const double b = t_cur - tau;
    return signed_ds * std::exp(lambda * a) /
           (std::pow(a, alpha - 1.0) - growth * std::pow(b, alpha - 1.0));
  });
}

NodeSet select_nodes(KernelForm form, const SelectorConfig& cfg, long n, double h, double alpha,
                     double lambda) {
  switch (cfg.kind) {
    case SelectorKind::full:
      return select_full(n);
    case SelectorKind::equal_height:
      return form == KernelForm::single
                 ? select_height_single(n, h, alpha, lambda, cfg.delta, cfg.height_reading)
                 : select_height_diff(n, h, alpha, lambda, cfg.delta);
    case SelectorKind::equal_area:
      return form == KernelForm::single ? select_area_single(n, h, alpha, lambda, cfg.delta)
                                        : select_area_diff(n, h, alpha, lambda, cfg.delta);
  }
  throw ConfigError("unknown selector kind");
}

namespace {

void put_double(std::ostream& os, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  os.write(buf, res.ptr - buf);
}

}  // namespace

void write_nodes_csv(std::ostream& os, const std::vector<NodeSet>& sets, double h, double alpha,
                     double lambda, KernelForm form, bool with_kernel) {
  os << "step,node_index,node_time" << (with_kernel ? ",kernel_value" : "") << '\n';
  for (const NodeSet& s : sets) {
    const KernelContext ctx = KernelContext::at_step(s.target_step, h, alpha, lambda);
    for (long idx : s.indices) {
      const double tau = static_cast<double>(idx) * h;
      os << (s.target_step + 1) << ',' << idx << ',';
      put_double(os, tau);
      if (with_kernel) {
        os << ',';
        if (form == KernelForm::single) {
          put_double(os, kernel_single(ctx, tau));
        } else if (idx < s.target_step) {
          put_double(os, kernel_diff(ctx, tau));
        }
      }
      os << '\n';
    }
  }
}

}  // namespace tfode
