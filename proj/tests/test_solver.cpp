#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tfode/bench.hpp"
#include "tfode/error.hpp"
#include "tfode/problem.hpp"
#include "tfode/solver.hpp"

using namespace tfode;

namespace {

const Rhs zero_rhs = [](double, double) { return 0.0; };

SolverConfig make_cfg(Scheme scheme, double h, SelectorKind kind = SelectorKind::full, double delta = 0.0) {
  SolverConfig c;
  c.scheme = scheme;
  c.h = h;
  c.selector.kind = kind;
  c.selector.delta = delta;
  return c;
}

double run_error(int id, double a, double l, double T, const SolverConfig& cfg) {
  auto [ivp, exact] = builtin_example(id, a, l, T);
  return max_error(solve(ivp, cfg), exact);
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("first step") {
    const TemperedIVP z = make_ivp(0.5, 1.0, 1.0, {2.0}, zero_rhs);
    const StepOutcome s0 = first_step(z, 0.1, 0.0);
    CHECK(s0.corr == doctest::Approx(x0_eval(z, 0.1)).epsilon(1e-15));

    const TemperedIVP one = make_ivp(1.0, 0.0, 1.0, {0.0}, [](double, double) { return 1.0; });
    const StepOutcome s1 = first_step(one, 0.1, 1.0);
    CHECK(s1.pred == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(s1.corr == doctest::Approx(0.1).epsilon(1e-15));

    auto [ivp, exact] = builtin_example(3, 0.5, 1.0, 4.0);
    const StepOutcome s3 = first_step(ivp, 0.1, ivp.rhs(0.0, 1.0));
    CHECK(std::abs(s3.corr - exact.value(0.1)) < 5e-2);
  }

  TEST_CASE("zero right-hand side reproduces the initial-history term") {
    for (Scheme sc : {Scheme::baseline, Scheme::single_form, Scheme::diff_form}) {
      const double a = sc == Scheme::diff_form ? 1.4 : 0.6;
      std::vector<double> c{1.5};
      if (a > 1.0) c.push_back(-0.75);
      const TemperedIVP ivp = make_ivp(a, 1.0, 2.0, c, zero_rhs);
      const SelectorKind kind = sc == Scheme::baseline ? SelectorKind::full : SelectorKind::equal_area;
      const SolveResult r = solve(ivp, make_cfg(sc, 0.05, kind, 0.5));
      for (std::size_t j = 0; j < r.values.size(); ++j) {
        CHECK(r.values[j] == doctest::Approx(x0_eval(ivp, r.times[j])).epsilon(1e-13));
      }
    }
  }

  TEST_CASE("difference step with zero rhs telescopes") {
    const TemperedIVP ivp = make_ivp(1.3, 1.0, 2.0, {1.0, 0.5}, zero_rhs);
    SolveHistory hist{{0.9, 0.8, 0.7}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
    const StepOutcome s = step_diff_form(hist, 2, NodeSet{{1, 2}, 2, 1}, ivp, 0.1, WeightMode::derived);
    CHECK(s.corr == doctest::Approx(0.7 + x0_eval(ivp, 0.3) - x0_eval(ivp, 0.2)).epsilon(1e-15));
    const StepOutcome z = step_single_form(hist, 2, NodeSet{{0, 2}, 2, 0},
                                           make_ivp(0.5, 1.0, 1.0, {1.0}, zero_rhs), 0.1);
    CHECK(z.corr == doctest::Approx(x0_eval(make_ivp(0.5, 1.0, 1.0, {1.0}, zero_rhs), 0.3)));
  }

  TEST_CASE("baseline node counts") {
    auto [ivp, exact] = builtin_example(1, 0.5, 1.0, 1.0);
    const long long expected[] = {65, 230, 860, 3320, 13040};
    int k = 0;
    for (double h : {0.1, 0.05, 0.025, 0.0125, 0.00625}) {
      const SolveResult r = solve(ivp, make_cfg(Scheme::baseline, h));
      CHECK(r.node_usage.total == expected[k++]);
      CHECK(r.node_usage.distinct_evals == 2 * std::lround(1.0 / h) + 1);
    }
  }

  TEST_CASE("difference form node counts for alpha in (1, 2)") {
    const long long expected[] = {29, 59, 119, 239, 479};
    for (double a : {1.2, 1.5, 1.8}) {
      auto [ivp, exact] = builtin_example(2, a, 1.0, 1.0);
      int k = 0;
      for (double h : {0.1, 0.05, 0.025, 0.0125, 0.00625}) {
        for (SelectorKind kind : {SelectorKind::equal_height, SelectorKind::equal_area}) {
          const SolveResult r = solve(ivp, make_cfg(Scheme::diff_form, h, kind, 10 * h));
          CHECK(r.node_usage.total == expected[k]);
        }
        ++k;
      }
    }
  }

  TEST_CASE("single form, equal height, alpha = 0.8 error level") {
    const double e = run_error(1, 0.8, 1.0, 1.0, make_cfg(Scheme::single_form, 0.1, SelectorKind::equal_height, 0.1));
    CHECK(e == doctest::Approx(8.23e-3).epsilon(0.01));
  }

  TEST_CASE("baseline with lambda = 0 equals the classical fractional Adams method") {
    for (double a : {0.3, 0.7, 1.0}) {
      auto [ivp, exact] = builtin_example(1, a, 0.0, 1.0);
      const double h = 1.0 / 40;
      const SolveResult r = solve(ivp, make_cfg(Scheme::baseline, h));
      const auto ref = oracle::fractional_abm(a, 0.0, h, 40, ivp.rhs_function());
      for (std::size_t j = 0; j < r.values.size(); ++j) {
        CHECK(std::abs(r.values[j] - static_cast<double>(ref[j])) < 1e-12);
      }
    }
  }

  TEST_CASE("baseline with alpha = 1, lambda = 0 equals the trapezoid predictor-corrector") {
    const TemperedIVP ivp = make_ivp(1.0, 0.0, 2.0, {1.0}, [](double, double x) { return -x; });
    const SolveResult r = solve(ivp, make_cfg(Scheme::baseline, 0.02));
    const auto ref = oracle::trapezoid_pc(1.0, 0.02, 100, ivp.rhs_function());
    for (std::size_t j = 0; j < r.values.size(); ++j) {
      CHECK(std::abs(r.values[j] - static_cast<double>(ref[j])) < 1e-12);
    }
  }

  TEST_CASE("baseline order for alpha = 0.5") {
    const double e80 = run_error(1, 0.5, 1.0, 1.0, make_cfg(Scheme::baseline, 1.0 / 80));
    const double e160 = run_error(1, 0.5, 1.0, 1.0, make_cfg(Scheme::baseline, 1.0 / 160));
    CHECK(observed_order(e80, e160) >= 1.85);
  }

  TEST_CASE("predicted anchor node counts, alpha = 0.5, delta = h/10") {
    auto [ivp, exact] = builtin_example(1, 0.5, 1.0, 1.0);
    const long long expected[] = {65, 230, 828, 2899, 9752};
    int k = 0;
    for (double h : {0.1, 0.05, 0.025, 0.0125, 0.00625}) {
      SolverConfig c = make_cfg(Scheme::diff_form, h, SelectorKind::equal_height, h / 10);
      c.anchor = HistoryAnchor::predicted;
      const SolveResult r = solve(ivp, c);
      CHECK(r.node_usage.total == expected[k++]);
      CHECK(max_error(r, exact) < 3e-2);
    }
  }

  TEST_CASE("configuration errors") {
    auto [ivp15, e15] = builtin_example(2, 1.5, 1.0, 1.0);
    CHECK_THROWS_AS((void)solve(ivp15, make_cfg(Scheme::single_form, 0.1, SelectorKind::equal_height, 0.1)), ConfigError);
    auto [ivp05, e05] = builtin_example(2, 0.5, 1.0, 1.0);
    CHECK_THROWS_AS((void)solve(ivp05, make_cfg(Scheme::baseline, 0.3)), ConfigError);
    CHECK_THROWS_AS((void)solve(ivp05, make_cfg(Scheme::baseline, 0.1, SelectorKind::equal_area, 0.1)), ConfigError);
    CHECK_THROWS_AS((void)solve(ivp05, make_cfg(Scheme::single_form, 0.1, SelectorKind::equal_area, 0.0)), ConfigError);
    auto [ivp15z, e15z] = builtin_example(2, 1.5, 0.0, 1.0);
    CHECK_THROWS_AS((void)solve(ivp15z, make_cfg(Scheme::diff_form, 0.1, SelectorKind::equal_area, 1.0)), ConfigError);
  }

  TEST_CASE("divergence and rhs failures carry the step") {
    const TemperedIVP blow = make_ivp(1.0, 0.0, 1.0, {1.0}, [](double, double x) { return 100.0 * x; });
    try {
      (void)solve(blow, make_cfg(Scheme::baseline, 0.01));
      FAIL("expected divergence");
    } catch (const DivergenceError& e) {
      CHECK(e.step() > 1);
      CHECK(e.step() <= 100);
    }
    const TemperedIVP bad = make_ivp(0.5, 1.0, 1.0, {1.0}, [](double t, double) {
      if (t > 0.45) throw DomainError("outside");
      return 0.0;
    });
    try {
      (void)solve(bad, make_cfg(Scheme::baseline, 0.1));
      FAIL("expected a solver error");
    } catch (const DivergenceError&) {
      FAIL("wrong error type");
    } catch (const SolverError& e) {
      CHECK(e.step() == 5);
    }
  }

  TEST_CASE("node recording") {
    auto [ivp, exact] = builtin_example(3, 0.5, 1.0, 1.0);
    SolverConfig c = make_cfg(Scheme::single_form, 0.1, SelectorKind::equal_height, 0.25);
    c.record_nodes = true;
    const SolveResult r = solve(ivp, c);
    REQUIRE(r.node_sets.size() == 10);
    long long total = 0;
    for (std::size_t n = 0; n < r.node_sets.size(); ++n) {
      CHECK(r.node_sets[n].target_step == static_cast<long>(n));
      total += static_cast<long long>(r.node_sets[n].size()) + 1;
    }
    CHECK(total == r.node_usage.total);
    CHECK(r.predictors.size() == 10);
    CHECK(r.wall_time >= 0.0);
  }

  TEST_CASE("recommended delta bands") {
    const double h = 0.01;
    CHECK(recommended_delta(Scheme::single_form, 0.2, h) == doctest::Approx(10 * h));
    CHECK(recommended_delta(Scheme::single_form, 0.5, h) == doctest::Approx(2.5 * h));
    CHECK(recommended_delta(Scheme::single_form, 0.8, h) == doctest::Approx(h));
    CHECK(recommended_delta(Scheme::diff_form, 0.2, h) == doctest::Approx(h / 2));
    CHECK(recommended_delta(Scheme::diff_form, 0.5, h) == doctest::Approx(h / 10));
    CHECK(recommended_delta(Scheme::diff_form, 0.8, h) == doctest::Approx(h / 50));
    CHECK(recommended_delta(Scheme::diff_form, 1.5, h) == doctest::Approx(10 * h));
    CHECK_THROWS_AS((void)recommended_delta(Scheme::single_form, 1.5, h), ConfigError);
  }
}

TEST_SUITE("solver_properties") {
  TEST_CASE("single form on the full mesh agrees with the baseline") {
    for (int id : {1, 3}) {
      for (double a : {0.2, 0.5, 0.8, 1.0}) {
        for (double l : {0.0, 1.0, 5.0}) {
          auto [ivp, exact] = builtin_example(id, a, l, 1.0);
          const SolveResult b = solve(ivp, make_cfg(Scheme::baseline, 1.0 / 40));
          const SolveResult s = solve(ivp, make_cfg(Scheme::single_form, 1.0 / 40));
          for (std::size_t j = 0; j < b.values.size(); ++j) {
            CHECK(std::abs(b.values[j] - s.values[j]) <= 1e-13 * std::max(1.0, std::abs(b.values[j])));
          }
          CHECK(b.node_usage.total == s.node_usage.total);
        }
      }
    }
  }

  TEST_CASE("baseline convergence order on example 1") {
    for (double a : {0.5, 0.8}) {
      const double e80 = run_error(1, a, 1.0, 1.0, make_cfg(Scheme::baseline, 1.0 / 80));
      const double e160 = run_error(1, a, 1.0, 1.0, make_cfg(Scheme::baseline, 1.0 / 160));
      CHECK(std::abs(observed_order(e80, e160) - 2.0) <= 0.2);
    }
    const double e80 = run_error(1, 0.2, 1.0, 1.0, make_cfg(Scheme::baseline, 1.0 / 80));
    const double e160 = run_error(1, 0.2, 1.0, 1.0, make_cfg(Scheme::baseline, 1.0 / 160));
    CHECK(observed_order(e80, e160) >= 1.3);
  }

  TEST_CASE("relaxation trajectories stay in [0, 1]") {
    // With delta = h the equidistributed meshes undershoot zero near t = 4 for
    // alpha >= 0.8 until h <= 1/80, so they run at h = 1/80.
    for (double a : {0.2, 0.5, 0.8, 1.0}) {
      auto [ivp, exact] = builtin_example(3, a, 1.0, 4.0);
      const double hf = 1.0 / 80;
      for (SolverConfig c : {make_cfg(Scheme::baseline, 0.05),
                             make_cfg(Scheme::single_form, hf, SelectorKind::equal_height, hf),
                             make_cfg(Scheme::single_form, hf, SelectorKind::equal_area, hf)}) {
        const SolveResult r = solve(ivp, c);
        for (double v : r.values) {
          CHECK(v >= 0.0);
          CHECK(v <= 1.0);
        }
      }
    }
  }

  TEST_CASE("difference form over the full history converges for alpha > 1") {
    // Same stepping as the equidistributed runs, but nothing below the
    // kernel's sign switch is dropped.
    double prev = 0.0;
    for (double h : {0.1, 0.05, 0.025}) {
      const double e = run_error(2, 1.5, 1.0, 5.0, make_cfg(Scheme::diff_form, h));
      if (prev > 0.0) CHECK(observed_order(prev, e) >= 1.2);
      prev = e;
    }
    CHECK(prev < 1e-3);
  }

  TEST_CASE("difference form cost is affine in the step count") {
    for (double T : {1.0, 2.0, 5.0}) {
      for (double h : {0.1, 0.05, 0.025}) {
        auto [ivp, exact] = builtin_example(2, 1.5, 1.0, T);
        const SolveResult r = solve(ivp, make_cfg(Scheme::diff_form, h, SelectorKind::equal_height, 10 * h));
        const long long N = std::llround(T / h);
        CHECK(r.node_usage.total == 3 * N - 1);
      }
    }
  }

  TEST_CASE("predictor-corrector gap shrinks at least like h^alpha") {
    // Rate over a factor 16 in h; single halvings dip below alpha before the
    // asymptotic regime (alpha = 0.8 between 1/40 and 1/80).
    for (double a : {0.2, 0.5, 0.8}) {
      auto [ivp, exact] = builtin_example(1, a, 1.0, 1.0);
      const auto gap = [&](double h) {
        const SolveResult r = solve(ivp, make_cfg(Scheme::baseline, h));
        return std::abs(r.values.back() - r.predictors.back());
      };
      const double g40 = gap(1.0 / 40), g160 = gap(1.0 / 160), g640 = gap(1.0 / 640);
      CHECK(std::log2(g40 / g640) / 4.0 >= a);
      CHECK(std::log2(g160 / g640) / 2.0 >= a);
    }
  }

  TEST_CASE("solves are deterministic") {
    auto [ivp, exact] = builtin_example(1, 0.5, 1.0, 1.0);
    const SolverConfig c = make_cfg(Scheme::single_form, 0.0125, SelectorKind::equal_area, 0.03);
    const SolveResult a = solve(ivp, c);
    const SolveResult b = solve(ivp, c);
    CHECK(a.values == b.values);
    CHECK(a.node_usage.per_step == b.node_usage.per_step);
  }
}

// Error levels the difference form is expected to reach for alpha in (1, 2).
// The drop-the-negative-region rule yields an O(1) error that does not
// shrink with h, so these checks currently fail; see the README.
TEST_SUITE("reference_diff_alpha_above_one") {
  TEST_CASE("example 1, alpha = 1.5, h = 1/10, delta = 10h") {
    auto [ivp, exact] = builtin_example(1, 1.5, 1.0, 1.0);
    const SolveResult r = solve(ivp, make_cfg(Scheme::diff_form, 0.1, SelectorKind::equal_height, 1.0));
    CHECK(r.node_usage.total == 29);
    const double e = max_error(r, exact);
    CHECK(e <= 3 * 9.00e-5);
    CHECK(e >= 9.00e-5 / 3);
  }

  TEST_CASE("example 2, alpha = 1.5, T = 5, h = 1/20, delta = 10h") {
    const double e10 = run_error(2, 1.5, 1.0, 5.0, make_cfg(Scheme::diff_form, 0.1, SelectorKind::equal_height, 1.0));
    auto [ivp, exact] = builtin_example(2, 1.5, 1.0, 5.0);
    const SolveResult r = solve(ivp, make_cfg(Scheme::diff_form, 0.05, SelectorKind::equal_height, 0.5));
    CHECK(r.node_usage.total == 299);
    const double e = max_error(r, exact);
    CHECK(e <= 3 * 7.55e-4);
    CHECK(e >= 7.55e-4 / 3);
    CHECK(std::abs(observed_order(e10, e) - 1.90) <= 0.3);
  }

  TEST_CASE("example 2, alpha = 1.2, T = 5, h = 1/10, delta = 10h") {
    const double e = run_error(2, 1.2, 1.0, 5.0, make_cfg(Scheme::diff_form, 0.1, SelectorKind::equal_height, 1.0));
    CHECK(e <= 3 * 7.97e-4);
    CHECK(e >= 7.97e-4 / 3);
  }
}
