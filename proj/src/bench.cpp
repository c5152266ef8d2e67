#include "tfode/bench.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "tfode/error.hpp"
#include "tfode/rhs_expr.hpp"

namespace tfode {

double max_error(const SolveResult& result, const ExactSolution& exact) {
  double e = 0.0;
  for (std::size_t j = 0; j < result.values.size(); ++j) {
    e = std::max(e, std::abs(result.values[j] - exact.value(result.times[j])));
  }
  return e;
}

double observed_order(double e_coarse, double e_fine, double ratio) {
  if (!(e_coarse > 0.0) || !(e_fine > 0.0)) {
    throw ConfigError("observed order needs two positive errors");
  }
  if (!(ratio > 0.0) || ratio == 1.0) {
    throw ConfigError("observed order needs a refinement ratio other than 1");
  }
  return std::log(e_coarse / e_fine) / std::log(ratio);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Parses a whole field as a double.
std::optional<double> to_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// "a/b" or "a"
std::optional<double> to_ratio(std::string_view s) {
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return to_number(s);
  const auto num = to_number(s.substr(0, slash));
  const auto den = to_number(s.substr(slash + 1));
  if (!num || !den || *den == 0.0) return std::nullopt;
  return *num / *den;
}

}  // namespace

DeltaSpec parse_delta(std::string_view text) {
  const std::string_view s = trim(text);
  const auto bad = [&] { return ConfigError("malformed delta '" + std::string(text) + "'"); };
  DeltaSpec out;
  const auto hpos = s.find('h');
  if (hpos == std::string_view::npos) {
    const auto v = to_ratio(s);
    if (!v) throw bad();
    out.value = *v;
    out.relative = false;
  } else {
    double coeff = 1.0;
    if (hpos > 0) {
      const auto c = to_number(s.substr(0, hpos));
      if (!c) throw bad();
      coeff = *c;
    }
    std::string_view rest = trim(s.substr(hpos + 1));
    if (!rest.empty()) {
      if (rest.front() != '/') throw bad();
      const auto den = to_number(rest.substr(1));
      if (!den || *den == 0.0) throw bad();
      coeff /= *den;
    }
    out.value = coeff;
    out.relative = true;
  }
  if (!(out.value > 0.0) || !std::isfinite(out.value)) {
    throw ConfigError("delta must be positive and finite, got '" + std::string(text) + "'");
  }
  return out;
}

std::vector<double> parse_h_list(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  for (;;) {
    const auto comma = text.find(',', pos);
    const std::string_view item =
        trim(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    const auto v = to_ratio(item);
    if (!v || !(*v > 0.0) || !std::isfinite(*v)) {
      throw ConfigError("malformed step length '" + std::string(item) + "'");
    }
    out.push_back(*v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

void BenchConfig::validate() const {
  if (example != 0 && (example < 1 || example > 3)) {
    throw ConfigError("example must be 1, 2 or 3");
  }
  if (example == 0 && rhs_expr.empty()) {
    throw ConfigError("either a built-in example or an rhs expression is required");
  }
  if (example != 0 && !rhs_expr.empty()) {
    throw ConfigError("choose a built-in example or an rhs expression, not both");
  }
  if (h_list.empty()) {
    throw ConfigError("the h list is empty");
  }
  for (std::size_t i = 1; i < h_list.size(); ++i) {
    if (!(h_list[i] < h_list[i - 1])) {
      throw ConfigError("h values must decrease along the sweep");
    }
  }
  if (timing_runs < 0) {
    throw ConfigError("timing runs must be non-negative");
  }
  if (scheme == Scheme::baseline && selector != SelectorKind::full) {
    throw ConfigError("the baseline scheme always uses the full mesh");
  }
}

std::pair<TemperedIVP, std::optional<ExactSolution>> build_problem(const BenchConfig& cfg) {
  if (cfg.example != 0) {
    auto [ivp, exact] = builtin_example(cfg.example, cfg.alpha, cfg.lambda, cfg.horizon);
    return {std::move(ivp), std::move(exact)};
  }
  TemperedIVP ivp = make_ivp(cfg.alpha, cfg.lambda, cfg.horizon, cfg.init, make_rhs(parse_expr(cfg.rhs_expr)));
  std::optional<ExactSolution> exact;
  if (!cfg.exact_expr.empty()) {
    ExprAst ast = parse_expr(cfg.exact_expr);
    exact = ExactSolution{[ast](double t) { return evaluate(ast, t, 0.0); }, cfg.exact_expr};
  }
  return {std::move(ivp), std::move(exact)};
}

SolverConfig solver_config_for(const BenchConfig& cfg, double h) {
  SolverConfig sc;
  sc.scheme = cfg.scheme;
  sc.h = h;
  sc.selector.kind = cfg.selector;
  sc.selector.height_reading = cfg.height_reading;
  if (cfg.selector != SelectorKind::full) {
    sc.selector.delta = cfg.delta ? cfg.delta->resolve(h) : recommended_delta(cfg.scheme, cfg.alpha, h);
  }
  sc.weight_mode = cfg.weight_mode;
  sc.anchor = cfg.anchor;
  sc.record_nodes = !cfg.dump_nodes_dir.empty();
  return sc;
}

namespace {

void put_double(std::ostream& os, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  os.write(buf, res.ptr - buf);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

KernelForm kernel_form(Scheme s) {
  return s == Scheme::single_form ? KernelForm::single : KernelForm::diff;
}

}  // namespace

std::string node_dump_name(double h) {
  std::ostringstream os;
  const double inv = 1.0 / h;
  const double r = std::round(inv);
  os << "nodes_h";
  if (std::abs(inv - r) <= 1e-9 * r) {
    os << static_cast<long long>(r);
  } else {
    put_double(os, inv);
  }
  os << ".csv";
  return os.str();
}

std::vector<ExperimentRow> run_sweep(const BenchConfig& cfg) {
  cfg.validate();
  auto [ivp, exact] = build_problem(cfg);
  std::vector<ExperimentRow> rows;
  rows.reserve(cfg.h_list.size());
  for (double h : cfg.h_list) {
    const SolverConfig sc = solver_config_for(cfg, h);
    SolveResult first;
    std::vector<double> times;
    try {
      first = solve(ivp, sc);
      SolverConfig timed = sc;
      timed.record_nodes = false;
      for (int r = 0; r < cfg.timing_runs; ++r) {
        times.push_back(solve(ivp, timed).wall_time);
      }
    } catch (const SolverError& e) {
      std::ostringstream os;
      os << "h=" << h << ": " << e.what();
      throw SolverError(os.str(), e.step());
    }
    ExperimentRow row;
    row.h = h;
    row.M = first.node_usage.total;
    row.distinct_evals = first.node_usage.distinct_evals;
    row.cpu_seconds = times.empty() ? first.wall_time : median(times);
    if (exact) {
      row.e_max = max_error(first, *exact);
      if (!rows.empty() && rows.back().e_max && *rows.back().e_max > 0.0 && *row.e_max > 0.0) {
        row.order = observed_order(*rows.back().e_max, *row.e_max, rows.back().h / h);
      }
    }
    if (!cfg.dump_nodes_dir.empty()) {
      std::filesystem::create_directories(cfg.dump_nodes_dir);
      const auto path = std::filesystem::path(cfg.dump_nodes_dir) / node_dump_name(h);
      std::ofstream out(path, std::ios::binary);
      if (!out) {
        throw ConfigError("cannot write node dump " + path.string());
      }
      write_nodes_csv(out, first.node_sets, h, ivp.alpha(), ivp.lambda(), kernel_form(cfg.scheme),
                      false);
    }
    rows.push_back(row);
  }
  return rows;
}

void write_csv(std::ostream& os, const std::vector<ExperimentRow>& rows) {
  os << "h,e_max,order,M,distinct_evals,cpu_seconds\n";
  for (const ExperimentRow& r : rows) {
    put_double(os, r.h);
    os << ',';
    if (r.e_max) put_double(os, *r.e_max);
    os << ',';
    if (r.order) put_double(os, *r.order);
    os << ',' << r.M << ',' << r.distinct_evals << ',';
    put_double(os, r.cpu_seconds);
    os << '\n';
  }
}

std::vector<ExperimentRow> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || trim(line) != "h,e_max,order,M,distinct_evals,cpu_seconds") {
    throw ConfigError("missing or unexpected CSV header");
  }
  std::vector<ExperimentRow> rows;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest = line;
    for (;;) {
      const auto c = rest.find(',');
      f.push_back(rest.substr(0, c));
      if (c == std::string_view::npos) break;
      rest.remove_prefix(c + 1);
    }
    const auto bad = [&] { return ConfigError("malformed CSV row at line " + std::to_string(lineno)); };
    if (f.size() != 6) throw bad();
    ExperimentRow r;
    const auto h = to_number(f[0]);
    const auto cpu = to_number(f[5]);
    if (!h || !cpu) throw bad();
    r.h = *h;
    r.cpu_seconds = *cpu;
    if (!trim(f[1]).empty()) {
      r.e_max = to_number(f[1]);
      if (!r.e_max) throw bad();
    }
    if (!trim(f[2]).empty()) {
      r.order = to_number(f[2]);
      if (!r.order) throw bad();
    }
    const auto parse_int = [&](std::string_view s) {
      s = trim(s);
      long long v = 0;
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) throw bad();
      return v;
    };
    r.M = parse_int(f[3]);
    r.distinct_evals = parse_int(f[4]);
    rows.push_back(r);
  }
  return rows;
}

void print_table(std::ostream& os, const std::vector<ExperimentRow>& rows) {
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << std::left << std::setw(12) << "h" << std::setw(12) << "e_max" << std::setw(8) << "order"
     << std::setw(10) << "M" << std::setw(12) << "evals" << "cpu_s\n";
  for (const ExperimentRow& r : rows) {
    std::ostringstream hcol;
    hcol << std::setprecision(6) << r.h;
    os << std::setw(12) << hcol.str();
    std::ostringstream ecol;
    if (r.e_max) ecol << std::scientific << std::setprecision(2) << *r.e_max;
    else ecol << "-";
    os << std::setw(12) << ecol.str();
    std::ostringstream ocol;
    if (r.order) ocol << std::fixed << std::setprecision(2) << *r.order;
    os << std::setw(8) << ocol.str() << std::setw(10) << r.M << std::setw(12) << r.distinct_evals;
    os << std::scientific << std::setprecision(3) << r.cpu_seconds << '\n';
  }
  os.flags(flags);
  os.precision(prec);
}

}  // namespace tfode
