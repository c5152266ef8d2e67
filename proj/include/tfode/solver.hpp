/**
 * @file solver.hpp
 * @brief Predictor-corrector time stepping (one corrector pass) for the
 *        full-memory baseline, the single-kernel form and the difference form.
 */
#pragma once

#include <vector>

#include "tfode/mesh.hpp"
#include "tfode/problem.hpp"
#include "tfode/weights.hpp"

namespace tfode {

enum class Scheme { baseline, single_form, diff_form };

/// Which state feeds the t_n-kernel weight of the last node in the
/// difference form. `accepted` uses f(t_n, x_n); `predicted` uses
/// f(t_n, x^P_n) from the previous step's predictor.
enum class HistoryAnchor { accepted, predicted };

struct SolverConfig {
  Scheme scheme = Scheme::baseline;
  SelectorConfig selector;
  double h = 0.1;
  WeightMode weight_mode = WeightMode::derived;  ///< diff_form only
  HistoryAnchor anchor = HistoryAnchor::accepted;  ///< diff_form only
  bool record_nodes = false;  ///< keep every step's NodeSet in the result
};

struct NodeUsage {
  std::vector<long> per_step;  ///< node uses at step n+1, index n
  long long total = 0;         ///< M
  long long distinct_evals = 0;
};

struct SolveResult {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> predictors;  ///< x^P_1..x^P_N
  NodeUsage node_usage;
  double wall_time = 0.0;  ///< seconds
  std::vector<NodeSet> node_sets;  ///< filled when record_nodes is set
};

/// Accepted states and memoized rhs values up to step n.
struct SolveHistory {
  std::vector<double> x;       ///< x_0..x_n
  std::vector<double> f;       ///< f(t_j, x_j)
  std::vector<double> f_pred;  ///< f(t_j, x^P_j); f_pred[0] = f[0]
};

struct StepOutcome {
  double pred = 0.0;
  double corr = 0.0;
  double f_pred = 0.0;  ///< f(t_{n+1}, pred)
};

/// Number of steps N = T/h. Throws ConfigError unless T/h is an integer >= 1.
[[nodiscard]] long step_count(double horizon, double h);

/// Validates config against the problem. Throws ConfigError.
void validate_config(const TemperedIVP& ivp, const SolverConfig& cfg);

/// Step 0 -> 1, shared by all schemes. `f0` is f(0, x_0).
[[nodiscard]] StepOutcome first_step(const TemperedIVP& ivp, double h, double f0);

[[nodiscard]] StepOutcome step_single_form(const SolveHistory& hist, long n, const NodeSet& nodes,
                                           const TemperedIVP& ivp, double h);

[[nodiscard]] StepOutcome step_diff_form(const SolveHistory& hist, long n, const NodeSet& nodes,
                                         const TemperedIVP& ivp, double h, WeightMode mode,
                                         HistoryAnchor anchor = HistoryAnchor::accepted);

[[nodiscard]] StepOutcome step_baseline(const SolveHistory& hist, long n, const TemperedIVP& ivp,
                                        double h);

/// Runs all steps. Throws ConfigError for an invalid config, DivergenceError
/// when |x| exceeds 1e12 or turns non-finite, and SolverError (with the
/// step) when the rhs raises a DomainError.
[[nodiscard]] SolveResult solve(const TemperedIVP& ivp, const SolverConfig& cfg);

/// Delta suggested for a scheme and order, as an absolute value:
/// single form 10h / 2.5h / h for small / middle / near-one alpha;
/// difference form h/2, h/10, h/50 for the same bands and 10h for alpha > 1.
[[nodiscard]] double recommended_delta(Scheme scheme, double alpha, double h);

}  // namespace tfode
