#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "qoinet/lp.hpp"
#include "qoinet/oracle.hpp"

using namespace qoinet;

namespace {

std::string scenario_path(const char* name) {
  return std::string(QOINET_SCENARIO_DIR) + "/" + name;
}

LpInstance table1() { return load_lp_file(scenario_path("table1.lp")); }

}  // namespace

TEST_CASE("the LP file format parses") {
  LpInstance inst = table1();
  CHECK(inst.num_vars == 2);
  CHECK(inst.num_cons == 3);
  CHECK(inst.c == std::vector<double>{2.0, 1.0});
  CHECK(inst.b == std::vector<double>{4.0, 15.0, 2.5});
  CHECK(inst.x_max == std::vector<double>{10.0, 10.0});
  CHECK(inst.at(1, 0) == 5.0);
  CHECK(inst.at(2, 1) == 0.0);
}

TEST_CASE("LP parse errors point at the offending line") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return parse_lp(in, "t.lp");
  };
  CHECK_THROWS_AS(parse("minimize 1"), ConfigError);
  CHECK_THROWS_AS(parse("maximize 1\nsubject_to\n1 <= 2 3\nbounds\n0 <= x1 <= 1"),
                  ConfigError);
  CHECK_THROWS_AS(parse("maximize 1\nsubject_to\n1 <= 2"), ConfigError);
  CHECK_THROWS_AS(
      parse("maximize 1\nsubject_to\nbounds\n0 <= x2 <= 1"), ConfigError);
  CHECK_THROWS_AS(
      parse("maximize 1 1\nsubject_to\nbounds\n0 <= x1 <= 1\n0 <= x1 <= 1"),
      ConfigError);
  // Zero upper bound fails validation.
  CHECK_THROWS_AS(parse("maximize 1\nsubject_to\nbounds\n0 <= x1 <= 0"),
                  ValidationError);
}

TEST_CASE("quadratic decision rule, first iteration") {
  LpInstance inst = table1();
  std::vector<double> Z(3, 0.0), x(2, 0.0);
  lp_choose_quadratic(inst, Z, 200.0, x);
  // clamp(400 / 27) and clamp(200 / 10) both hit the box bound.
  CHECK(x[0] == doctest::Approx(10.0));
  CHECK(x[1] == doctest::Approx(10.0));

  LpInstance zero_c = inst;
  zero_c.c = {0.0, 0.0};
  lp_choose_quadratic(zero_c, Z, 200.0, x);
  CHECK(x[0] == 0.0);
  CHECK(x[1] == 0.0);
}

TEST_CASE("large queues drive the decision to zero and drain") {
  LpInstance inst = table1();
  LpSolverState st = LpSolverState::initial(inst, 200.0);
  st.Z = {500.0, 500.0, 500.0};
  lp_step_quadratic(st, inst);
  CHECK(st.x == std::vector<double>{0.0, 0.0});
  CHECK(st.Z == std::vector<double>{496.0, 485.0, 497.5});
}

TEST_CASE("degenerate all-zero column follows the reduced objective") {
  LpInstance inst;
  inst.num_vars = 2;
  inst.num_cons = 1;
  inst.c = {1.5, -0.5};
  inst.b = {10.0};
  inst.x_max = {3.0, 3.0};
  inst.a = {0.0, 0.0};
  inst.validate();
  std::vector<double> Z{5.0}, x(2, 0.0);
  lp_choose_quadratic(inst, Z, 100.0, x);
  CHECK(x[0] == 3.0);  // positive objective weight saturates
  CHECK(x[1] == 0.0);  // non-positive weight rests at zero
}

TEST_CASE("max-weight decision rule is bang-bang") {
  LpInstance inst = table1();
  std::vector<double> Z(3, 0.0), x(2, 0.0);
  lp_choose_maxweight(inst, Z, 200.0, x);
  CHECK(x == std::vector<double>{10.0, 10.0});

  LpInstance zero_c = inst;
  zero_c.c = {0.0, -1.0};
  lp_choose_maxweight(zero_c, Z, 200.0, x);
  CHECK(x == std::vector<double>{0.0, 0.0});
}

TEST_CASE("reference problem reproduces the reported iterates") {
  LpInstance inst = table1();

  LpReport quad = solve_lp(inst, 200.0, 500, PolicyKind::Quadratic);
  CHECK(std::abs(quad.x_bar[0] - 2.531) <= 0.002);
  CHECK(std::abs(quad.x_bar[1] - 0.834) <= 0.002);
  CHECK(std::abs(quad.x_final[0] - 2.500) <= 0.001);
  CHECK(std::abs(quad.x_final[1] - 0.833) <= 0.001);
  CHECK(quad.objective == doctest::Approx(2.0 * quad.x_bar[0] + quad.x_bar[1]));

  LpReport mw = solve_lp(inst, 200.0, 500, PolicyKind::MaxWeight);
  CHECK(std::abs(mw.x_bar[0] - 2.540) <= 0.002);
  CHECK(std::abs(mw.x_bar[1] - 0.820) <= 0.002);
  CHECK(mw.x_final[0] == 0.0);
  CHECK(mw.x_final[1] == 0.0);
}

TEST_CASE("solving twice yields bit-identical reports") {
  LpInstance inst = table1();
  LpReport a = solve_lp(inst, 200.0, 500, PolicyKind::Quadratic);
  LpReport b = solve_lp(inst, 200.0, 500, PolicyKind::Quadratic);
  CHECK(a.x_bar == b.x_bar);
  CHECK(a.x_final == b.x_final);
  CHECK(a.residuals == b.residuals);
}

TEST_CASE("applying a fixed optimal point keeps queues at zero") {
  LpInstance inst = table1();
  LpSolverState st = LpSolverState::initial(inst, 200.0);
  std::vector<double> x_opt{2.5, 5.0 / 6.0};
  for (int t = 0; t < 200; ++t) {
    lp_apply_decision(st, inst, x_opt);
    for (double z : st.Z) CHECK(z <= 1e-9);
  }
  std::vector<double> bar = st.x_bar();
  CHECK(bar[0] == doctest::Approx(x_opt[0]).epsilon(1e-12));
  CHECK(bar[1] == doctest::Approx(x_opt[1]).epsilon(1e-12));
}

TEST_CASE("running residuals never exceed Z/t") {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 6; ++trial) {
    LpInstance inst = trial == 0 ? table1() : random_lp_instance(rng, 3, 5);
    for (PolicyKind kind : {PolicyKind::Quadratic, PolicyKind::MaxWeight}) {
      LpSolveOptions opts;
      opts.trace_sink = [&](const LpIterTrace& t) {
        double tt = static_cast<double>(t.iter + 1);
        for (int j = 0; j < inst.num_cons; ++j) {
          double resid = -inst.b[j];
          for (int i = 0; i < inst.num_vars; ++i)
            resid += inst.at(j, i) * t.x_bar[i];
          CHECK(resid <= t.Z[j] / tt + 1e-9);
        }
      };
      solve_lp(inst, 200.0, 400, kind, opts);
    }
  }
}

TEST_CASE("time-averaged objective stays above the optimum minus E/V") {
  SplitMix64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    LpInstance inst = random_lp_instance(rng, 3, 4);
    OracleLpSolution opt = oracle_lp_solve(inst, 0.02);
    REQUIRE(opt.found);
    double floor_value = opt.value - lp_energy_constant(inst) / 200.0;
    LpSolveOptions opts;
    opts.trace_sink = [&](const LpIterTrace& t) {
      CHECK(t.objective >= floor_value - 1e-9);
    };
    solve_lp(inst, 200.0, 300, PolicyKind::Quadratic, opts);
  }
}

TEST_CASE("queues stay below the slack-point bound") {
  // Every generated instance keeps the origin strictly feasible, so x* = 0
  // with slack eps = min_j b_j witnesses the interior-point bound.
  SplitMix64 rng(13);
  for (int trial = 0; trial < 8; ++trial) {
    LpInstance inst = random_lp_instance(rng, 3, 4);
    double eps = inst.b[0];
    for (double b : inst.b) eps = std::min(eps, b);
    REQUIRE(eps > 0.0);
    double y0_max = lp_default_y0_max(inst);
    double e = lp_energy_constant(inst);
    LpSolveOptions opts;
    opts.trace_sink = [&](const LpIterTrace& t) {
      for (int j = 0; j < inst.num_cons; ++j) {
        double slack_cap = (200.0 * (y0_max - 0.0) + e) / eps;
        double step_cap = 0.0;
        for (int i = 0; i < inst.num_vars; ++i)
          step_cap += std::abs(inst.at(j, i)) * inst.x_max[i];
        CHECK(t.Z[j] <= slack_cap + step_cap + 1e-9);
      }
    };
    solve_lp(inst, 200.0, 500, PolicyKind::Quadratic, opts);
  }
}

TEST_CASE("residual bound: frozen constant, decay, and dominance") {
  LpInstance inst = table1();
  // E = 24^2 + 95^2 + 12.5^2.
  CHECK(lp_energy_constant(inst) == doctest::Approx(9757.25));
  CHECK(lp_default_y0_max(inst) == doctest::Approx(30.0));

  double b100 = lp_residual_bound(inst, 200.0, 100, 30.0, 5.8333);
  double b1e6 = lp_residual_bound(inst, 200.0, 1000000, 30.0, 5.8333);
  CHECK(b1e6 < b100);
  CHECK(b1e6 == doctest::Approx(std::sqrt((2 * 9757.25 + 2 * 200 * (30 - 5.8333)) / 1e6)));

  LpSolveOptions opts;
  opts.y0_opt = 5.8333;
  LpReport rep = solve_lp(inst, 200.0, 500, PolicyKind::Quadratic, opts);
  REQUIRE(rep.residual_bound.has_value());
  for (double r : rep.residuals) CHECK(r <= *rep.residual_bound);
}

TEST_CASE("non-positive objective coefficients rest at the origin") {
  LpInstance inst = table1();
  inst.c = {-2.0, 0.0};
  for (PolicyKind kind : {PolicyKind::Quadratic, PolicyKind::MaxWeight}) {
    LpReport rep = solve_lp(inst, 200.0, 100, kind);
    CHECK(rep.x_bar == std::vector<double>{0.0, 0.0});
    CHECK(rep.objective == 0.0);
  }
}

TEST_CASE("degenerate one-iteration solve") {
  LpInstance inst = table1();
  LpReport rep = solve_lp(inst, 200.0, 1, PolicyKind::Quadratic);
  CHECK(rep.iterations == 1);
  // Average of the first decision (10, 10) plus the follow-up decision.
  CHECK(rep.x_bar[0] == doctest::Approx(10.0 + rep.x_final[0]));
  CHECK_THROWS_AS(solve_lp(inst, 200.0, 0, PolicyKind::Quadratic),
                  ValidationError);
}
