/**
 * @file tfode.cpp
 * @brief Command-line front end: step-size sweeps and node-placement dumps.
 *
 * Exit codes: 0 success, 2 configuration error, 3 solver failure.
 */
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "tfode/bench.hpp"
#include "tfode/error.hpp"
#include "tfode/mesh.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

struct Options {
  tfode::BenchConfig cfg;
  std::string h_list = "1/10,1/20,1/40,1/80,1/160";
  std::string delta;
  std::string init;
  std::string out;
  long step = 0;
  double h = 0.1;
};

void add_problem_options(CLI::App& cmd, Options& o) {
  auto* ex = cmd.add_option("--example", o.cfg.example, "built-in problem")
                 ->check(CLI::Range(1, 3));
  auto* rhs = cmd.add_option("--rhs", o.cfg.rhs_expr, "right-hand side f(t, x)");
  ex->excludes(rhs);
  cmd.add_option("--init", o.init, "initial coefficients c0[,c1] (with --rhs)")->needs(rhs);
  cmd.add_option("--exact", o.cfg.exact_expr, "exact solution in t (with --rhs)")->needs(rhs);
  cmd.add_option("--alpha", o.cfg.alpha, "fractional order in (0, 2)")->required();
  cmd.add_option("--lambda", o.cfg.lambda, "tempering rate")->capture_default_str();
  cmd.add_option("--T", o.cfg.horizon, "final time")->capture_default_str();
  cmd.add_option("--scheme", o.cfg.scheme, "baseline, single or diff")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, tfode::Scheme>{{"baseline", tfode::Scheme::baseline},
                                               {"single", tfode::Scheme::single_form},
                                               {"diff", tfode::Scheme::diff_form}},
          CLI::ignore_case));
  cmd.add_option("--selector", o.cfg.selector, "full, height or area")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, tfode::SelectorKind>{{"full", tfode::SelectorKind::full},
                                                     {"height", tfode::SelectorKind::equal_height},
                                                     {"area", tfode::SelectorKind::equal_area}},
          CLI::ignore_case));
  cmd.add_option("--delta", o.delta, "dy or ds: multiple of h (\"10h\", \"h/2\") or absolute");
  cmd.add_option("--weight-mode", o.cfg.weight_mode, "difference weights: derived or literal")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, tfode::WeightMode>{{"derived", tfode::WeightMode::derived},
                                                   {"literal", tfode::WeightMode::literal}},
          CLI::ignore_case));
  cmd.add_option("--height-formula", o.cfg.height_reading,
                 "single-kernel equal-height advance: derived or printed")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, tfode::HeightReading>{{"derived", tfode::HeightReading::derived},
                                                      {"printed", tfode::HeightReading::printed}},
          CLI::ignore_case));
  cmd.add_option("--anchor", o.cfg.anchor, "difference form last-node state: accepted or predicted")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, tfode::HistoryAnchor>{{"accepted", tfode::HistoryAnchor::accepted},
                                                      {"predicted", tfode::HistoryAnchor::predicted}},
          CLI::ignore_case));
}

void finish_config(Options& o) {
  if (o.cfg.example == 0 && o.cfg.rhs_expr.empty()) {
    throw tfode::ConfigError("one of --example or --rhs is required");
  }
  if (!o.delta.empty()) {
    o.cfg.delta = tfode::parse_delta(o.delta);
  }
  if (!o.cfg.rhs_expr.empty()) {
    if (o.init.empty()) {
      throw tfode::ConfigError("--rhs needs --init");
    }
    std::stringstream ss(o.init);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        o.cfg.init.push_back(std::stod(item, &used));
        if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw tfode::ConfigError("malformed initial coefficient '" + item + "'");
      }
    }
  }
}

int run_sweep_cmd(Options& o) {
  finish_config(o);
  o.cfg.h_list = tfode::parse_h_list(o.h_list);
  const auto rows = tfode::run_sweep(o.cfg);
  tfode::print_table(std::cout, rows);
  if (!o.out.empty()) {
    std::ofstream out(o.out, std::ios::binary);
    if (!out) {
      throw tfode::ConfigError("cannot open " + o.out + " for writing");
    }
    tfode::write_csv(out, rows);
  }
  return 0;
}

int run_nodes_cmd(Options& o) {
  finish_config(o);
  const auto [ivp, exact] = tfode::build_problem(o.cfg);
  const tfode::SolverConfig sc = tfode::solver_config_for(o.cfg, o.h);
  const tfode::KernelForm form =
      o.cfg.scheme == tfode::Scheme::single_form ? tfode::KernelForm::single : tfode::KernelForm::diff;
  const tfode::NodeSet nodes =
      sc.selector.kind == tfode::SelectorKind::full
          ? tfode::select_full(o.step)
          : tfode::select_nodes(form, sc.selector, o.step, o.h, ivp.alpha(), ivp.lambda());
  tfode::write_nodes_csv(std::cout, {nodes}, o.h, ivp.alpha(), ivp.lambda(), form, true);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Predictor-corrector solver for tempered fractional ODEs"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);

  Options sweep;
  auto* sw = app.add_subcommand("sweep", "run an h sweep and report errors, orders and node counts");
  add_problem_options(*sw, sweep);
  sw->add_option("--h", sweep.h_list, "step lengths, e.g. \"1/10,1/20\"")->capture_default_str();
  sw->add_option("--out", sweep.out, "CSV output file");
  sw->add_option("--dump-nodes", sweep.cfg.dump_nodes_dir, "directory for per-h node CSVs");
  sw->add_option("--timing-runs", sweep.cfg.timing_runs, "timed repeats after one warm-up")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);

  Options nodes;
  auto* nd = app.add_subcommand("nodes", "print the node set of one step with kernel values");
  add_problem_options(*nd, nodes);
  nd->add_option("--step-h", nodes.h, "step length")->capture_default_str();
  nd->add_option("--n", nodes.step, "history end index n (target step n+1)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*sw) return run_sweep_cmd(sweep);
    return run_nodes_cmd(nodes);
  } catch (const tfode::SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const tfode::ConvergenceError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const tfode::ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const tfode::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const tfode::DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
}
