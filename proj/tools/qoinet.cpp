#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qoinet/lp.hpp"
#include "qoinet/oracle.hpp"
#include "qoinet/sampling.hpp"
#include "qoinet/scenario_io.hpp"
#include "qoinet/simulator.hpp"

namespace {

using namespace qoinet;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerifyFailed = 2;

std::optional<std::uint64_t> parse_seed_flag(const std::string& s) {
  if (s.empty()) return std::nullopt;
  if (s == "random") {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
  return std::stoull(s);
}

// Writes through `out` to the file when set, stdout otherwise.
struct OutputTarget {
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file.open(path, std::ios::binary);
      if (!file) throw ConfigError(path + ": cannot open for writing");
    }
  }
  std::ostream& stream() { return file.is_open() ? file : std::cout; }
  bool to_file() const { return file.is_open(); }
  std::ofstream file;
};

std::vector<PolicyKind> parse_policies(const std::string& name) {
  if (name == "both") return {PolicyKind::Quadratic, PolicyKind::MaxWeight};
  return {parse_policy(name)};
}

int cmd_simulate(const std::string& scenario_path, const std::string& policy,
                 const std::optional<double>& v, const std::optional<std::int64_t>& horizon,
                 const std::string& seed_flag, std::int64_t burn_in, bool trace,
                 const std::string& output) {
  Scenario sc = load_scenario(scenario_path);
  RunOptions opts;
  opts.v_override = v;
  if (horizon) opts.horizon_override = horizon;
  opts.seed_override = parse_seed_flag(seed_flag);
  opts.burn_in = burn_in;

  OutputTarget out(output);
  PolicyKind kind = parse_policy(policy);

  if (trace) {
    write_trace_header(out.stream(), sc.device_count());
    opts.trace_sink = [&](const SlotTrace& t) { write_trace_row(out.stream(), t); };
  }
  RunMetrics m = run(sc, kind, opts);
  if (m.bound_violations > 0 && kind == PolicyKind::Quadratic)
    std::cerr << "warning: " << m.bound_violations
              << " slots exceeded the worst-case queue bounds\n";

  if (!trace) {
    write_summary_header(out.stream());
    write_summary_row(out.stream(), m);
  } else if (out.to_file()) {
    write_summary_header(std::cout);
    write_summary_row(std::cout, m);
  }
  return kExitOk;
}

int cmd_sweep(const std::string& scenario_path, const std::string& policy,
              const std::vector<double>& v_values,
              const std::vector<std::string>& seed_flags,
              const std::optional<std::int64_t>& horizon, std::int64_t burn_in,
              const std::string& output) {
  Scenario sc = load_scenario(scenario_path);
  std::vector<PolicyKind> kinds = parse_policies(policy);

  std::vector<std::uint64_t> seeds;
  for (const auto& s : seed_flags) {
    auto parsed = parse_seed_flag(s);
    seeds.push_back(parsed.value_or(sc.seed));
  }
  if (seeds.empty()) seeds.push_back(sc.seed);

  OutputTarget out(output);
  write_summary_header(out.stream());
  for (std::uint64_t seed : seeds) {
    RunOptions opts;
    if (horizon) opts.horizon_override = horizon;
    opts.seed_override = seed;
    opts.burn_in = burn_in;
    std::vector<RunMetrics> rows = sweep_v(sc, kinds, v_values, opts);
    for (const RunMetrics& m : rows) write_summary_row(out.stream(), m);
  }
  return kExitOk;
}

void write_lp_summary_header(std::ostream& os, const LpInstance& inst) {
  os << "policy,V,iters,objective";
  for (int i = 1; i <= inst.num_vars; ++i) os << ",xbar_" << i;
  for (int i = 1; i <= inst.num_vars; ++i) os << ",x_" << i;
  for (int j = 1; j <= inst.num_cons; ++j) os << ",residual_" << j;
  os << ",residual_bound\n";
}

void write_lp_summary_row(std::ostream& os, const LpInstance& inst,
                          PolicyKind kind, const LpReport& rep) {
  os << policy_name(kind) << ',' << format_double(rep.V) << ',' << rep.iterations
     << ',' << format_double(rep.objective);
  for (double v : rep.x_bar) os << ',' << format_double(v);
  for (double v : rep.x_final) os << ',' << format_double(v);
  for (double v : rep.residuals) os << ',' << format_double(v);
  os << ',' << (rep.residual_bound ? format_double(*rep.residual_bound) : "");
  os << '\n';
  (void)inst;
}

int cmd_lp_solve(const std::string& lp_path, const std::string& policy, double v,
                 std::int64_t iters, bool trace, const std::string& output,
                 const std::optional<double>& y0_opt) {
  LpInstance inst = load_lp_file(lp_path);
  PolicyKind kind = parse_policy(policy);
  OutputTarget out(output);

  LpSolveOptions opts;
  opts.y0_opt = y0_opt;
  if (trace) {
    std::ostream& os = out.stream();
    os << "iter";
    for (int i = 1; i <= inst.num_vars; ++i) os << ",x_" << i;
    for (int i = 1; i <= inst.num_vars; ++i) os << ",xbar_" << i;
    for (int j = 1; j <= inst.num_cons; ++j) os << ",Z_" << j;
    os << ",objective\n";
    opts.trace_sink = [&](const LpIterTrace& t) {
      os << t.iter;
      for (double x : t.x) os << ',' << format_double(x);
      for (double x : t.x_bar) os << ',' << format_double(x);
      for (double z : t.Z) os << ',' << format_double(z);
      os << ',' << format_double(t.objective) << '\n';
    };
  }

  LpReport rep = solve_lp(inst, v, iters, kind, opts);

  if (trace) {
    std::ostream& os = out.stream();
    os << "# " << policy_name(kind) << " V=" << format_double(rep.V)
       << " iters=" << rep.iterations
       << " objective=" << format_double(rep.objective) << " xbar=";
    for (int i = 0; i < inst.num_vars; ++i)
      os << (i ? "," : "") << format_double(rep.x_bar[i]);
    os << " x=";
    for (int i = 0; i < inst.num_vars; ++i)
      os << (i ? "," : "") << format_double(rep.x_final[i]);
    os << " residuals=";
    for (int j = 0; j < inst.num_cons; ++j)
      os << (j ? "," : "") << format_double(rep.residuals[j]);
    if (rep.residual_bound) os << " bound=" << format_double(*rep.residual_bound);
    os << '\n';
    if (out.to_file()) {
      write_lp_summary_header(std::cout, inst);
      write_lp_summary_row(std::cout, inst, kind, rep);
    }
  } else {
    write_lp_summary_header(out.stream(), inst);
    write_lp_summary_row(out.stream(), inst, kind, rep);
  }
  return kExitOk;
}

struct SuiteResult {
  std::string name;
  std::int64_t passed = 0;
  std::int64_t total = 0;
};

SuiteResult suite_lemma1(std::int64_t samples, std::uint64_t seed) {
  SplitMix64 rng(seed);
  SuiteResult res{"lemma1"};
  res.total = samples;
  for (std::int64_t k = 0; k < samples; ++k) {
    double x = 100.0 * rng.next_unit();
    std::vector<double> a(rng.next() % 5), b(rng.next() % 5);
    for (double& v : a) v = -100.0 + 200.0 * rng.next_unit();
    for (double& v : b) v = 100.0 * rng.next_unit();
    Lemma1Check chk = verify_lemma1(x, a, b);
    if (chk.quadratic_holds && chk.linear_holds) ++res.passed;
  }
  return res;
}

SuiteResult suite_separability(std::int64_t samples, std::uint64_t seed) {
  SplitMix64 rng(seed);
  SuiteResult res{"separability"};
  res.total = samples;
  const double v_grid[] = {0.0, 10.0, 800.0};
  const SmallInstanceCaps caps;
  // Three-device instances shrink the rate and shift caps so the full joint
  // enumeration stays inside the oracle budget.
  Scenario two = random_small_scenario(rng, 2, caps.max_rate, caps.max_rate,
                                       caps.max_rate);
  Scenario three = random_small_scenario(rng, caps.max_devices, 1, 1, 2);
  for (std::int64_t k = 0; k < samples; ++k) {
    const Scenario& sc = (k % 5 == 4) ? three : two;
    double V = v_grid[k % 3];
    QueueVector state = random_queues(rng, sc.device_count(), caps.max_queue);
    SlotRealization slot = sample_slot(sc, rng.next(), 0);
    DecisionVector dec = decide(PolicyKind::Quadratic, sc, state, slot, V);
    double policy_obj = decision_objective(state, slot, dec, V);
    OracleDecision best = oracle_joint_decision(sc, state, slot, V);
    if (policy_obj == best.objective) ++res.passed;
  }
  return res;
}

SuiteResult suite_lemma3(std::int64_t slots, std::uint64_t seed,
                         const std::string& scenario_path) {
  Scenario sc = scenario_path.empty()
                    ? parse_scenario_text(two_device_scenario_text(), "<builtin>")
                    : load_scenario(scenario_path);
  RunOptions opts;
  opts.horizon_override = slots;
  opts.seed_override = seed;
  RunMetrics m = run(sc, PolicyKind::Quadratic, opts);
  SuiteResult res{"lemma3"};
  res.total = slots;
  res.passed = slots - m.bound_violations;
  return res;
}

SuiteResult suite_lp(std::int64_t samples, std::uint64_t seed) {
  SplitMix64 rng(seed);
  SuiteResult res{"lp"};
  res.total = samples;
  for (std::int64_t k = 0; k < samples; ++k) {
    LpInstance inst = random_lp_instance(rng, 3, 5);
    std::vector<double> Z(inst.num_cons);
    for (double& z : Z) z = 20.0 * rng.next_unit();
    std::vector<double> closed(inst.num_vars);
    lp_choose_quadratic(inst, Z, 200.0, closed);
    const double step = SmallInstanceCaps{}.grid_step;
    std::vector<double> grid = oracle_lp_step(inst, Z, 200.0, step);
    bool ok = true;
    for (int i = 0; i < inst.num_vars; ++i)
      if (std::abs(closed[i] - grid[i]) > step + 1e-9) ok = false;
    if (ok) ++res.passed;
  }
  return res;
}

int cmd_verify(const std::string& suite, std::optional<std::int64_t> samples,
               std::uint64_t seed, const std::string& scenario_path) {
  std::vector<SuiteResult> results;
  bool all = suite == "all";
  if (all || suite == "lemma1")
    results.push_back(suite_lemma1(samples.value_or(100000), seed));
  if (all || suite == "separability")
    results.push_back(suite_separability(samples.value_or(300), seed));
  if (all || suite == "lemma3")
    results.push_back(suite_lemma3(samples.value_or(100000), seed, scenario_path));
  if (all || suite == "lp")
    results.push_back(suite_lp(samples.value_or(50), seed));
  if (results.empty()) {
    std::cerr << "unknown suite '" << suite
              << "' (expected lemma1, separability, lemma3, lp, or all)\n";
    return kExitUsage;
  }
  bool ok = true;
  for (const SuiteResult& r : results) {
    std::cout << r.name << ": " << r.passed << "/" << r.total << " passed\n";
    if (r.passed != r.total) ok = false;
  }
  return ok ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-hop quality-of-information simulator and LP solver"};
  app.require_subcommand(1);

  // simulate
  std::string sim_scenario, sim_policy = "quadratic", sim_seed, sim_output;
  std::optional<double> sim_v;
  std::optional<std::int64_t> sim_horizon;
  std::int64_t sim_burn_in = 0;
  bool sim_trace = false;
  auto* sim = app.add_subcommand("simulate", "Run one scenario under one policy");
  sim->add_option("scenario", sim_scenario, "Scenario config file")->required();
  sim->add_option("--policy", sim_policy, "quadratic or maxweight");
  sim->add_option("--V", sim_v, "Override the scenario's V");
  sim->add_option("--horizon", sim_horizon, "Override the slot count");
  sim->add_option("--seed", sim_seed, "Override the seed; 'random' draws one");
  sim->add_option("--burn-in", sim_burn_in, "Slots excluded from averages");
  sim->add_flag("--trace", sim_trace, "Emit the per-slot trace CSV");
  sim->add_option("--output", sim_output, "Write CSV to this file");

  // sweep
  std::string sw_scenario, sw_policy = "both", sw_output;
  std::vector<double> sw_v;
  std::vector<std::string> sw_seeds;
  std::optional<std::int64_t> sw_horizon;
  std::int64_t sw_burn_in = 0;
  auto* sw = app.add_subcommand("sweep", "Run a V x policy grid");
  sw->add_option("scenario", sw_scenario, "Scenario config file")->required();
  sw->add_option("--V", sw_v, "V values")->required()->delimiter(',');
  sw->add_option("--policy", sw_policy, "quadratic, maxweight, or both");
  sw->add_option("--seeds", sw_seeds, "Seeds, one sweep per seed")->delimiter(',');
  sw->add_option("--horizon", sw_horizon, "Override the slot count");
  sw->add_option("--burn-in", sw_burn_in, "Slots excluded from averages");
  sw->add_option("--output", sw_output, "Write CSV to this file");

  // lp-solve
  std::string lp_path, lp_policy = "quadratic", lp_output;
  double lp_v = 200.0;
  std::int64_t lp_iters = 500;
  bool lp_trace = false;
  std::optional<double> lp_y0_opt;
  auto* lp = app.add_subcommand("lp-solve", "Solve a linear program iteratively");
  lp->add_option("instance", lp_path, "LP instance file")->required();
  lp->add_option("--V", lp_v, "Utility weight");
  lp->add_option("--iters", lp_iters, "Iteration count");
  lp->add_option("--policy", lp_policy, "quadratic or maxweight");
  lp->add_flag("--trace", lp_trace, "Emit the per-iteration CSV");
  lp->add_option("--output", lp_output, "Write CSV to this file");
  lp->add_option("--y0-opt", lp_y0_opt,
                 "Known optimal value; enables the residual bound column");

  // verify
  std::string vf_suite = "all", vf_scenario;
  std::optional<std::int64_t> vf_samples;
  std::uint64_t vf_seed = 1;
  auto* vf = app.add_subcommand("verify", "Run brute-force verification suites");
  vf->add_option("--suite", vf_suite, "lemma1, separability, lemma3, lp, or all");
  vf->add_option("--samples", vf_samples, "Sample count for the chosen suite");
  vf->add_option("--seed", vf_seed, "Suite RNG seed");
  vf->add_option("--scenario", vf_scenario, "Scenario for lemma3 (default built-in)");

  try {
    app.parse(argc, argv);
    if (sim->parsed())
      return cmd_simulate(sim_scenario, sim_policy, sim_v, sim_horizon, sim_seed,
                          sim_burn_in, sim_trace, sim_output);
    if (sw->parsed())
      return cmd_sweep(sw_scenario, sw_policy, sw_v, sw_seeds, sw_horizon,
                       sw_burn_in, sw_output);
    if (lp->parsed())
      return cmd_lp_solve(lp_path, lp_policy, lp_v, lp_iters, lp_trace, lp_output,
                          lp_y0_opt);
    if (vf->parsed())
      return cmd_verify(vf_suite, vf_samples, vf_seed, vf_scenario);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
