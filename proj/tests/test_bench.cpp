#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "tfode/bench.hpp"
#include "tfode/error.hpp"

using namespace tfode;

namespace {

BenchConfig example_cfg(int id, double a, double T, Scheme s, SelectorKind k, const char* delta,
                        const char* hs = "1/10,1/20,1/40,1/80,1/160") {
  BenchConfig c;
  c.example = id;
  c.alpha = a;
  c.lambda = 1.0;
  c.horizon = T;
  c.scheme = s;
  c.selector = k;
  if (delta) c.delta = parse_delta(delta);
  c.h_list = parse_h_list(hs);
  c.timing_runs = 0;
  return c;
}

}  // namespace

TEST_SUITE("bench") {
  TEST_CASE("max_error") {
    SolveResult r;
    r.times = {0.0, 0.5, 1.0};
    r.values = {0.0, 0.25, 1.0};
    const ExactSolution sq{[](double t) { return t * t; }, "t^2"};
    CHECK(max_error(r, sq) == 0.0);
    r.values[1] += 0.125;
    CHECK(max_error(r, sq) == 0.125);
  }

  TEST_CASE("observed_order") {
    CHECK(observed_order(4e-4, 1e-4) == doctest::Approx(2.0));
    CHECK(observed_order(1.04e-4, 4.46e-6) == doctest::Approx(4.54).epsilon(1e-3));
    CHECK(observed_order(3e-3, 3e-3) == 0.0);
    CHECK_THROWS_AS((void)observed_order(0.0, 1e-3), ConfigError);
    CHECK_THROWS_AS((void)observed_order(1e-3, 0.0), ConfigError);
  }

  TEST_CASE("delta parsing") {
    const auto rel = [](const char* s) { return parse_delta(s); };
    CHECK(rel("10h").relative);
    CHECK(rel("10h").value == 10.0);
    CHECK(rel("h").value == 1.0);
    CHECK(rel("h/2").value == 0.5);
    CHECK(rel("5h/2").value == 2.5);
    CHECK(rel("2.5h").value == 2.5);
    CHECK(rel(" h/50 ").resolve(0.1) == doctest::Approx(0.002));
    CHECK_FALSE(rel("0.05").relative);
    CHECK(rel("0.05").resolve(0.1) == 0.05);
    for (const char* bad : {"", "h/0", "-1h", "abc", "10hh", "h/", "0", "1/0"}) {
      CAPTURE(bad);
      CHECK_THROWS_AS((void)parse_delta(bad), ConfigError);
    }
  }

  TEST_CASE("h list parsing") {
    const auto hs = parse_h_list("1/10, 1/20,0.025");
    REQUIRE(hs.size() == 3);
    CHECK(hs[0] == 0.1);
    CHECK(hs[1] == 0.05);
    CHECK(hs[2] == 0.025);
    CHECK_THROWS_AS((void)parse_h_list("1/10,,1/20"), ConfigError);
    CHECK_THROWS_AS((void)parse_h_list("-0.1"), ConfigError);
  }

  TEST_CASE("relaxation sweep with equal height, alpha = 0.5") {
    const auto rows = run_sweep(example_cfg(3, 0.5, 4.0, Scheme::single_form, SelectorKind::equal_height, "h", "1/10"));
    REQUIRE(rows.size() == 1);
    CHECK(*rows[0].e_max == doctest::Approx(6.54e-3).epsilon(0.005));
    CHECK(rows[0].M == 314);
    CHECK_FALSE(rows[0].order.has_value());
  }

  TEST_CASE("baseline sweep node counts") {
    const auto rows = run_sweep(example_cfg(1, 0.5, 1.0, Scheme::baseline, SelectorKind::full, nullptr));
    const long long expected[] = {65, 230, 860, 3320, 13040};
    REQUIRE(rows.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(rows[i].M == expected[i]);
      CHECK(rows[i].order.has_value() == (i > 0));
    }
  }

  TEST_CASE("zero right-hand side sweeps exactly") {
    BenchConfig c;
    c.rhs_expr = "0";
    c.init = {1.0};
    c.exact_expr = "exp(-t)";
    c.alpha = 0.7;
    c.horizon = 1.0;
    c.scheme = Scheme::single_form;
    c.selector = SelectorKind::equal_area;
    c.h_list = {0.1, 0.05};
    c.timing_runs = 1;
    const auto rows = run_sweep(c);
    for (const auto& r : rows) CHECK(*r.e_max <= 1e-15);
    CHECK_FALSE(rows[1].order.has_value());
    c.exact_expr.clear();
    const auto no_exact = run_sweep(c);
    CHECK_FALSE(no_exact[0].e_max.has_value());
  }

  TEST_CASE("config validation") {
    BenchConfig c = example_cfg(1, 0.5, 1.0, Scheme::baseline, SelectorKind::full, nullptr);
    c.h_list = {0.05, 0.1};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = example_cfg(1, 0.5, 1.0, Scheme::baseline, SelectorKind::equal_area, "h");
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = example_cfg(1, 0.5, 1.0, Scheme::baseline, SelectorKind::full, nullptr);
    c.rhs_expr = "x";
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = example_cfg(5, 0.5, 1.0, Scheme::baseline, SelectorKind::full, nullptr);
    CHECK_THROWS_AS(c.validate(), ConfigError);
  }

  TEST_CASE("default delta comes from the recommended bands") {
    BenchConfig c = example_cfg(1, 0.2, 1.0, Scheme::single_form, SelectorKind::equal_height, nullptr, "1/10");
    CHECK(solver_config_for(c, 0.1).selector.delta == doctest::Approx(1.0));
  }

  TEST_CASE("solver failures name the step length") {
    const BenchConfig c = example_cfg(1, 1.8, 1.0, Scheme::diff_form, SelectorKind::equal_height, "10h", "1/10");
    try {
      (void)run_sweep(c);
      FAIL("expected a solver error");
    } catch (const SolverError& e) {
      CHECK(std::string(e.what()).find("h=0.1") != std::string::npos);
      CHECK(e.step() > 0);
    }
  }

  TEST_CASE("node dumps") {
    const auto dir = std::filesystem::temp_directory_path() / "tfode_node_dump_test";
    std::filesystem::remove_all(dir);
    BenchConfig c = example_cfg(3, 0.5, 1.0, Scheme::single_form, SelectorKind::equal_area, "h", "1/10,1/20");
    c.dump_nodes_dir = dir.string();
    const auto rows = run_sweep(c);
    CHECK(node_dump_name(0.1) == "nodes_h10.csv");
    CHECK(node_dump_name(0.3) == "nodes_h3.3333333333333335.csv");
    std::ifstream in(dir / "nodes_h20.csv");
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    CHECK(line == "step,node_index,node_time");
    long long lines = 0;
    while (std::getline(in, line)) ++lines;
    // node uses minus the t_{n+1} use per step
    CHECK(lines == rows[1].M - 20);
    std::filesystem::remove_all(dir);
  }
}

TEST_SUITE("bench_properties") {
  TEST_CASE("CSV round trip") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<ExperimentRow> rows;
    for (int i = 0; i < 40; ++i) {
      ExperimentRow r;
      r.h = 1.0 / (10 << (i % 6));
      if (i % 5 != 4) r.e_max = u(rng) * std::pow(10.0, -(i % 12));
      if (i % 6 != 0) r.order = 4 * u(rng) - 1;
      r.M = 2 + static_cast<long long>(rng() % 100000);
      r.distinct_evals = static_cast<long long>(rng() % 5000);
      r.cpu_seconds = u(rng) * 1e-3;
      rows.push_back(r);
    }
    std::stringstream ss;
    write_csv(ss, rows);
    const std::string text = ss.str();
    CHECK(text.rfind("h,e_max,order,M,distinct_evals,cpu_seconds\n", 0) == 0);
    CHECK(text.find('\r') == std::string::npos);
    CHECK(read_csv(ss) == rows);
  }

  TEST_CASE("first row leaves the order empty") {
    std::stringstream ss;
    write_csv(ss, {ExperimentRow{0.1, 0.5, std::nullopt, 65, 21, 0.25}});
    CHECK(ss.str() == "h,e_max,order,M,distinct_evals,cpu_seconds\n0.1,0.5,,65,21,0.25\n");
  }

  TEST_CASE("malformed CSV is rejected") {
    std::stringstream bad_header("h,e\n");
    CHECK_THROWS_AS((void)read_csv(bad_header), ConfigError);
    std::stringstream bad_row("h,e_max,order,M,distinct_evals,cpu_seconds\n0.1,x,,1,2,3\n");
    CHECK_THROWS_AS((void)read_csv(bad_row), ConfigError);
    std::stringstream short_row("h,e_max,order,M,distinct_evals,cpu_seconds\n0.1,1,2\n");
    CHECK_THROWS_AS((void)read_csv(short_row), ConfigError);
  }

  TEST_CASE("sweeps are deterministic apart from timing") {
    const BenchConfig c = example_cfg(1, 0.5, 1.0, Scheme::single_form, SelectorKind::equal_area, "5h/2", "1/10,1/20,1/40");
    const auto a = run_sweep(c);
    const auto b = run_sweep(c);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].e_max == b[i].e_max);
      CHECK(a[i].M == b[i].M);
      CHECK(a[i].distinct_evals == b[i].distinct_evals);
    }
  }
}
