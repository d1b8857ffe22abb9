#include "qoinet/lp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qoinet {

void LpInstance::validate() const {
  if (num_vars <= 0) throw ValidationError("lp: needs at least one variable");
  if (num_cons < 0) throw ValidationError("lp: negative constraint count");
  if (static_cast<int>(c.size()) != num_vars ||
      static_cast<int>(x_max.size()) != num_vars ||
      static_cast<int>(b.size()) != num_cons ||
      a.size() != static_cast<std::size_t>(num_cons) * num_vars)
    throw ValidationError("lp: inconsistent dimensions");
  for (int i = 0; i < num_vars; ++i)
    if (!(x_max[i] > 0.0))
      throw ValidationError("lp: x_max must be positive for x" +
                            std::to_string(i + 1));
}

namespace {

struct LineReader {
  std::istream& in;
  const std::string& name;
  int line_no = 0;

  // Next non-empty line with comments stripped; false at EOF.
  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string::npos)
        line.erase(hash);
      tokens.clear();
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) tokens.push_back(tok);
      if (!tokens.empty()) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(name + ":" + std::to_string(line_no) + ": " + msg);
  }
};

double parse_num(const LineReader& r, const std::string& tok) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    r.fail("expected a number, got '" + tok + "'");
  }
  if (used != tok.size()) r.fail("expected a number, got '" + tok + "'");
  return v;
}

}  // namespace

LpInstance parse_lp(std::istream& in, const std::string& name) {
  LineReader reader{in, name};
  std::vector<std::string> tok;
  LpInstance inst;

  if (!reader.next(tok) || tok[0] != "maximize")
    reader.fail("expected 'maximize c_1 .. c_n'");
  for (std::size_t i = 1; i < tok.size(); ++i)
    inst.c.push_back(parse_num(reader, tok[i]));
  inst.num_vars = static_cast<int>(inst.c.size());
  if (inst.num_vars == 0) reader.fail("maximize needs at least one coefficient");

  if (!reader.next(tok) || tok[0] != "subject_to")
    reader.fail("expected 'subject_to'");

  bool in_bounds = false;
  while (reader.next(tok)) {
    if (tok[0] == "bounds") {
      in_bounds = true;
      break;
    }
    // a_1 .. a_n <= b
    if (static_cast<int>(tok.size()) != inst.num_vars + 2 ||
        tok[inst.num_vars] != "<=")
      reader.fail("expected a constraint row 'a_1 .. a_n <= b'");
    for (int i = 0; i < inst.num_vars; ++i)
      inst.a.push_back(parse_num(reader, tok[i]));
    inst.b.push_back(parse_num(reader, tok[inst.num_vars + 1]));
  }
  if (!in_bounds) reader.fail("expected a 'bounds' section");
  inst.num_cons = static_cast<int>(inst.b.size());

  inst.x_max.assign(inst.num_vars, 0.0);
  std::vector<bool> seen(inst.num_vars, false);
  for (int k = 0; k < inst.num_vars; ++k) {
    if (!reader.next(tok)) reader.fail("expected a bounds line '0 <= x<i> <= max'");
    if (tok.size() != 5 || tok[0] != "0" || tok[1] != "<=" || tok[3] != "<=" ||
        tok[2].size() < 2 || tok[2][0] != 'x')
      reader.fail("expected a bounds line '0 <= x<i> <= max'");
    int idx = 0;
    try {
      idx = std::stoi(tok[2].substr(1));
    } catch (const std::exception&) {
      reader.fail("bad variable name '" + tok[2] + "'");
    }
    if (idx < 1 || idx > inst.num_vars)
      reader.fail("variable index out of range in '" + tok[2] + "'");
    if (seen[idx - 1]) reader.fail("duplicate bounds for '" + tok[2] + "'");
    seen[idx - 1] = true;
    inst.x_max[idx - 1] = parse_num(reader, tok[4]);
  }
  if (reader.next(tok)) reader.fail("unexpected content after bounds");

  inst.validate();
  return inst;
}

LpInstance load_lp_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  return parse_lp(in, path);
}

LpSolverState LpSolverState::initial(const LpInstance& inst, double V) {
  LpSolverState s;
  s.Z.assign(inst.num_cons, 0.0);
  s.x.assign(inst.num_vars, 0.0);
  s.x_sum.assign(inst.num_vars, 0.0);
  s.t = 0;
  s.V = V;
  return s;
}

std::vector<double> LpSolverState::x_bar() const {
  std::vector<double> out(x_sum.size(), 0.0);
  if (t > 0)
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = x_sum[i] / static_cast<double>(t);
  return out;
}

void lp_choose_quadratic(const LpInstance& inst, std::span<const double> Z,
                         double V, std::span<double> x_out) {
  for (int i = 0; i < inst.num_vars; ++i) {
    double denom = 0.0;
    double num = inst.c[i] * V;
    for (int j = 0; j < inst.num_cons; ++j) {
      double aji = inst.at(j, i);
      denom += aji * aji;
      num -= aji * Z[j];
    }
    if (denom == 0.0) {
      // Degenerate column: the objective reduces to -2 V c_i x_i.
      x_out[i] = inst.c[i] > 0.0 ? inst.x_max[i] : 0.0;
    } else {
      x_out[i] = std::clamp(num / denom, 0.0, inst.x_max[i]);
    }
  }
}

void lp_choose_maxweight(const LpInstance& inst, std::span<const double> Z,
                         double V, std::span<double> x_out) {
  for (int i = 0; i < inst.num_vars; ++i) {
    double w = V * inst.c[i];
    for (int j = 0; j < inst.num_cons; ++j) w -= inst.at(j, i) * Z[j];
    x_out[i] = w > 0.0 ? inst.x_max[i] : 0.0;
  }
}

void lp_apply_decision(LpSolverState& state, const LpInstance& inst,
                       std::span<const double> x) {
  for (int j = 0; j < inst.num_cons; ++j) {
    double flow = -inst.b[j];
    for (int i = 0; i < inst.num_vars; ++i) flow += inst.at(j, i) * x[i];
    state.Z[j] = std::max(state.Z[j] + flow, 0.0);
  }
  for (int i = 0; i < inst.num_vars; ++i) state.x_sum[i] += x[i];
  ++state.t;
}

void lp_step_quadratic(LpSolverState& state, const LpInstance& inst) {
  lp_choose_quadratic(inst, state.Z, state.V, state.x);
  lp_apply_decision(state, inst, state.x);
}

void lp_step_maxweight(LpSolverState& state, const LpInstance& inst) {
  lp_choose_maxweight(inst, state.Z, state.V, state.x);
  lp_apply_decision(state, inst, state.x);
}

double lp_energy_constant(const LpInstance& inst) {
  double e = 0.0;
  for (int j = 0; j < inst.num_cons; ++j) {
    double row = inst.b[j];
    for (int i = 0; i < inst.num_vars; ++i)
      row += std::abs(inst.at(j, i)) * inst.x_max[i];
    e += row * row;
  }
  return e;
}

double lp_default_y0_max(const LpInstance& inst) {
  double m = 0.0;
  for (int i = 0; i < inst.num_vars; ++i)
    m += std::max(inst.c[i], 0.0) * inst.x_max[i];
  return m;
}

double lp_residual_bound(const LpInstance& inst, double V, std::int64_t t,
                         double y0_max, double y0_opt) {
  double e = lp_energy_constant(inst);
  return std::sqrt((2.0 * e + 2.0 * V * (y0_max - y0_opt)) /
                   static_cast<double>(t));
}

LpReport solve_lp(const LpInstance& inst, double V, std::int64_t iterations,
                  PolicyKind kind, const LpSolveOptions& opts) {
  inst.validate();
  if (iterations < 1) throw ValidationError("lp: iterations must be >= 1");

  auto choose = kind == PolicyKind::Quadratic ? lp_choose_quadratic
                                              : lp_choose_maxweight;
  LpSolverState state = LpSolverState::initial(inst, V);
  std::vector<double> x(inst.num_vars, 0.0);
  std::vector<double> running(inst.num_vars, 0.0);

  for (std::int64_t t = 0; t < iterations; ++t) {
    choose(inst, state.Z, V, x);
    lp_apply_decision(state, inst, x);
    if (opts.trace_sink) {
      for (int i = 0; i < inst.num_vars; ++i)
        running[i] = state.x_sum[i] / static_cast<double>(state.t);
      double obj = 0.0;
      for (int i = 0; i < inst.num_vars; ++i) obj += inst.c[i] * running[i];
      opts.trace_sink(LpIterTrace{t, x, running, state.Z, obj});
    }
  }

  // Decision after the last queue update; reported but not applied.
  choose(inst, state.Z, V, x);

  LpReport rep;
  rep.V = V;
  rep.iterations = iterations;
  rep.E = lp_energy_constant(inst);
  rep.x_final = x;
  rep.x_bar.resize(inst.num_vars);
  for (int i = 0; i < inst.num_vars; ++i)
    rep.x_bar[i] = (state.x_sum[i] + x[i]) / static_cast<double>(iterations);
  rep.residuals.resize(inst.num_cons);
  for (int j = 0; j < inst.num_cons; ++j) {
    double r = -inst.b[j];
    for (int i = 0; i < inst.num_vars; ++i) r += inst.at(j, i) * rep.x_bar[i];
    rep.residuals[j] = r;
  }
  for (int i = 0; i < inst.num_vars; ++i)
    rep.objective += inst.c[i] * rep.x_bar[i];
  if (opts.y0_opt) {
    double y0_max = opts.y0_max ? *opts.y0_max : lp_default_y0_max(inst);
    rep.residual_bound =
        lp_residual_bound(inst, V, iterations, y0_max, *opts.y0_opt);
  }
  return rep;
}

}  // namespace qoinet
