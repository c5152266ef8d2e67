/**
 * @file bench.hpp
 * @brief Step-size sweeps: max errors, observed orders, node counts,
 *        timings, and their CSV form.
 */
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tfode/problem.hpp"
#include "tfode/solver.hpp"

namespace tfode {

struct ExperimentRow {
  double h = 0.0;
  std::optional<double> e_max;  ///< absent without an exact solution
  std::optional<double> order;  ///< absent on the first row
  long long M = 0;
  long long distinct_evals = 0;
  double cpu_seconds = 0.0;

  friend bool operator==(const ExperimentRow&, const ExperimentRow&) = default;
};

/// max_j |x_j - exact(t_j)| over the grid.
[[nodiscard]] double max_error(const SolveResult& result, const ExactSolution& exact);

/// log(e_coarse / e_fine) / log(ratio); ratio 2 for a halving.
/// Throws ConfigError when either error is not positive.
[[nodiscard]] double observed_order(double e_coarse, double e_fine, double ratio = 2.0);

/// Selector delta: "10h", "h", "h/2", "5h/2", "2.5h" are multiples of h;
/// a bare number such as "0.05" is absolute.
struct DeltaSpec {
  double value = 0.0;
  bool relative = true;

  [[nodiscard]] double resolve(double h) const { return relative ? value * h : value; }
};

/// Throws ConfigError on malformed input or a non-positive value.
[[nodiscard]] DeltaSpec parse_delta(std::string_view text);

/// Comma-separated step lengths, each a fraction "1/10" or a decimal.
[[nodiscard]] std::vector<double> parse_h_list(std::string_view text);

struct BenchConfig {
  int example = 0;  ///< 1..3 for a built-in problem, 0 for rhs_expr
  std::string rhs_expr;
  std::vector<double> init;
  std::string exact_expr;  ///< optional exact solution in t for rhs_expr problems
  double alpha = 0.5;
  double lambda = 1.0;
  double horizon = 1.0;
  Scheme scheme = Scheme::baseline;
  SelectorKind selector = SelectorKind::full;
  std::optional<DeltaSpec> delta;  ///< unset: recommended_delta
  HeightReading height_reading = HeightReading::derived;
  WeightMode weight_mode = WeightMode::derived;
  HistoryAnchor anchor = HistoryAnchor::accepted;
  std::vector<double> h_list;
  std::string dump_nodes_dir;  ///< empty: no node dump
  int timing_runs = 3;         ///< timed repeats after one discarded warm-up

  /// Throws ConfigError on inconsistent settings.
  void validate() const;
};

/// Builds the problem (and exact solution, if any) a config describes.
[[nodiscard]] std::pair<TemperedIVP, std::optional<ExactSolution>> build_problem(
    const BenchConfig& cfg);

/// Solver configuration for one step length of the sweep.
[[nodiscard]] SolverConfig solver_config_for(const BenchConfig& cfg, double h);

/// Runs the sweep in h order. Solver failures are rethrown as SolverError
/// whose message names the failing h and step.
[[nodiscard]] std::vector<ExperimentRow> run_sweep(const BenchConfig& cfg);

/// Header `h,e_max,order,M,distinct_evals,cpu_seconds`, LF line endings,
/// shortest round-trip number formatting, empty fields for absent values.
void write_csv(std::ostream& os, const std::vector<ExperimentRow>& rows);

/// Inverse of write_csv. Throws ConfigError on malformed input.
[[nodiscard]] std::vector<ExperimentRow> read_csv(std::istream& is);

/// Aligned plain-text table of the rows.
void print_table(std::ostream& os, const std::vector<ExperimentRow>& rows);

/// File name used for a node dump at step h: "nodes_h<1/h>.csv".
[[nodiscard]] std::string node_dump_name(double h);

}  // namespace tfode
