#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qoinet/policy.hpp"

namespace qoinet {

// maximize c.x subject to A x <= b, 0 <= x <= x_max.
struct LpInstance {
  int num_vars = 0;
  int num_cons = 0;
  std::vector<double> c;      // n
  std::vector<double> b;      // m
  std::vector<double> x_max;  // n
  std::vector<double> a;      // m x n, row-major

  double at(int j, int i) const { return a[static_cast<std::size_t>(j) * num_vars + i]; }
  double& at(int j, int i) { return a[static_cast<std::size_t>(j) * num_vars + i]; }

  void validate() const;  // throws ValidationError
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Text format: `maximize c_1 .. c_n`, `subject_to` rows `a_1 .. a_n <= b`,
// `bounds` lines `0 <= x<i> <= max`. '#' starts a comment.
LpInstance parse_lp(std::istream& in, const std::string& name);
LpInstance load_lp_file(const std::string& path);

// Virtual-queue iteration state. x_bar() is the running average of the
// decisions already applied to the queues.
struct LpSolverState {
  std::vector<double> Z;      // m virtual queues
  std::vector<double> x;      // last decision
  std::vector<double> x_sum;  // sum of applied decisions
  std::int64_t t = 0;         // queue updates applied
  double V = 0.0;

  static LpSolverState initial(const LpInstance& inst, double V);
  std::vector<double> x_bar() const;
};

// Decision rules. Both write the chosen x; neither touches the queues.
void lp_choose_quadratic(const LpInstance& inst, std::span<const double> Z,
                         double V, std::span<double> x_out);
void lp_choose_maxweight(const LpInstance& inst, std::span<const double> Z,
                         double V, std::span<double> x_out);

// Queue update Z_j <- max(Z_j + sum_i a_ji x_i - b_j, 0) plus averaging.
void lp_apply_decision(LpSolverState& state, const LpInstance& inst,
                       std::span<const double> x);

void lp_step_quadratic(LpSolverState& state, const LpInstance& inst);
void lp_step_maxweight(LpSolverState& state, const LpInstance& inst);

// E = sum_j (sum_i |a_ji| x_i^max + b_j)^2.
double lp_energy_constant(const LpInstance& inst);

// Tight linear upper bound of the objective over the box.
double lp_default_y0_max(const LpInstance& inst);

// sqrt((1/t) (2 E + 2 V (y0_max - y0_opt))); the same value bounds every
// constraint residual at iteration t.
double lp_residual_bound(const LpInstance& inst, double V, std::int64_t t,
                         double y0_max, double y0_opt);

struct LpIterTrace {
  std::int64_t iter = 0;
  std::span<const double> x;      // decision of this iteration
  std::span<const double> x_bar;  // running average including it
  std::span<const double> Z;      // queues after the update
  double objective = 0.0;         // c . x_bar
};

struct LpReport {
  std::vector<double> x_bar;      // reported average (see solve_lp)
  std::vector<double> x_final;    // decision after the last queue update
  std::vector<double> residuals;  // sum_i a_ji xbar_i - b_j per constraint
  double objective = 0.0;         // c . x_bar
  double E = 0.0;
  double V = 0.0;
  std::int64_t iterations = 0;
  std::optional<double> residual_bound;  // present when y0_opt is supplied
};

struct LpSolveOptions {
  std::optional<double> y0_opt;
  std::optional<double> y0_max;  // default: lp_default_y0_max
  std::function<void(const LpIterTrace&)> trace_sink;
};

// Runs `iterations` queue updates from Z = 0. A final decision is computed
// from the post-loop queues but not applied; the reported average divides the
// sum of all iterations+1 decisions by `iterations`, and x_final is that last
// decision.
LpReport solve_lp(const LpInstance& inst, double V, std::int64_t iterations,
                  PolicyKind kind, const LpSolveOptions& opts = {});

}  // namespace qoinet
