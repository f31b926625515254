#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

#include "tsgag/csvout.hpp"
#include "tsgag/galerkin.hpp"
#include "tsgag/inequalities.hpp"
#include "tsgag/rlcompare.hpp"
#include "tsgag/scenario.hpp"
#include "tsgag/svgout.hpp"

namespace tsgag {

namespace fs = std::filesystem;

const std::vector<std::string> kCommands = {
    "measure",    "seminorm",  "norm",         "poincare",
    "discrete-poincare",       "cross-bounds", "coercivity",
    "hardy",      "ckn",       "solve",        "compare-rl",
    "report",
};

bool is_known_command(const std::string& command) {
  return std::find(kCommands.begin(), kCommands.end(), command) != kCommands.end();
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

QuadConfig effective_quad(const Scenario& sc, const CliOptions& opts) {
  QuadConfig cfg = sc.quad;
  if (opts.rel_tol) cfg.rel_tol = *opts.rel_tol;
  return cfg;
}

std::vector<int> effective_mesh(const Scenario& sc, const CliOptions& opts) {
  if (!opts.mesh.empty()) return opts.mesh;
  return sc.cells_per_interval;
}

std::string join_ints(const std::vector<int>& v) {
  std::ostringstream oss;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) oss << ';';
    oss << v[i];
  }
  return oss.str();
}

std::string join_doubles(const std::vector<double>& v) {
  std::ostringstream oss;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) oss << ';';
    oss << csv_format(CsvCell{v[i]});
  }
  return oss.str();
}

std::vector<SvgSeries> function_series(const TSFunction& u, const TimeScale& ts) {
  std::vector<SvgSeries> out;
  for (std::size_t c = 0; c < ts.component_count(); ++c) {
    const Component& comp = ts.components()[c];
    SvgSeries s;
    if (comp.is_atom()) {
      s.line = false;
      s.marks = true;
      s.points.push_back({comp.position(), u.atom_value(ts, c)});
    } else {
      const int npts = 257;
      for (int i = 0; i < npts; ++i) {
        const double t =
            comp.lo() + comp.measure() * (i + 0.5) / static_cast<double>(npts);
        try {
          s.points.push_back({t, u.eval_component(c, t)});
        } catch (const Error&) {
          // singular point; skip the sample
        }
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::string> header_for(const std::string& cmd) {
  if (cmd == "measure") {
    return {"scenario_id", "n_components", "total_measure", "delta0",
            "diam",        "integral_u",   "integral_err"};
  }
  if (cmd == "seminorm") {
    return {"scenario_id", "alpha", "p",     "value",   "value_p", "cc_intra",
            "cc_inter",    "dd",    "mixed", "err_est", "diverged"};
  }
  if (cmd == "norm") {
    return {"scenario_id", "alpha",   "p",       "lp_norm",
            "seminorm",    "wnorm",   "err_est", "diverged"};
  }
  if (cmd == "poincare") {
    return {"scenario_id", "alpha", "p",     "method", "mesh",   "c_p",
            "lhs",         "rhs",   "ratio", "holds",  "err_est"};
  }
  if (cmd == "discrete-poincare") {
    return {"scenario_id", "p", "weights", "c1", "certified_lower",
            "heuristic_upper"};
  }
  if (cmd == "cross-bounds") {
    return {"scenario_id", "alpha", "p",     "c0",    "c_upper", "lhs",
            "rhs",         "ratio", "holds", "err_est", "note"};
  }
  if (cmd == "coercivity") {
    return {"scenario_id", "alpha", "p",     "constant_used", "lhs",
            "rhs",         "ratio", "holds", "err_est"};
  }
  if (cmd == "hardy") {
    return {"scenario_id", "alpha", "p",     "beta",          "x0",    "lhs",
            "rhs",         "ratio", "constant_used", "holds", "err_est", "note"};
  }
  if (cmd == "ckn") {
    return {"scenario_id", "alpha", "p",   "q",     "theta",         "beta",
            "b",           "r",     "x0",  "lhs",   "rhs",           "ratio",
            "constant_used", "holds", "err_est", "note"};
  }
  if (cmd == "solve") {
    return {"scenario_id", "alpha",  "dofs",      "mesh",
            "residual",    "energy", "projected", "solution_csv"};
  }
  if (cmd == "compare-rl") {
    return {"scenario_id", "a", "b", "alpha", "p", "gagliardo_of_constant",
            "rl_norm_of_constant", "rl_in_lp", "conclusion"};
  }
  fail(ErrorCode::DomainError, "no header for command " + cmd);
}

struct CommandResult {
  std::vector<std::vector<CsvCell>> rows;
  bool math_flag = false;
  std::vector<std::string> artifacts;
};

CommandResult cmd_measure(const Scenario& sc, const CliOptions& opts) {
  const QuadConfig cfg = effective_quad(sc, opts);
  CommandResult res;
  std::vector<CsvCell> row{sc.id,
                           static_cast<long long>(sc.timescale.component_count()),
                           sc.timescale.total_measure(), sc.timescale.delta0(),
                           sc.timescale.diam()};
  if (sc.functions.count(sc.function_name)) {
    IntegralValue iv = delta_integral(sc.function(sc.function_name), sc.timescale, cfg);
    row.push_back(iv.value);
    row.push_back(iv.err_est);
  } else {
    row.push_back(std::string{});
    row.push_back(std::string{});
  }
  res.rows.push_back(std::move(row));
  return res;
}

CommandResult cmd_seminorm(const Scenario& sc, const CliOptions& opts) {
  const QuadConfig cfg = effective_quad(sc, opts);
  const TSFunction& u = sc.function(sc.function_name);
  SeminormResult r = seminorm(u, sc.seminorm_params(), sc.timescale, cfg);
  CommandResult res;
  res.rows.push_back({sc.id, sc.alpha, sc.p, r.value, r.total_p(), r.cc.intra,
                      r.cc.inter, r.dd, r.mixed, r.err_est, r.diverged});
  res.math_flag = r.diverged;
  if (opts.svg) {
    const std::string path = opts.out_dir + "/seminorm_" + sc.id + ".svg";
    write_svg_plot(path, "u on the time scale (" + sc.id + ")", "t", "u(t)",
                   function_series(u, sc.timescale));
    res.artifacts.push_back(path);
  }
  return res;
}

CommandResult cmd_norm(const Scenario& sc, const CliOptions& opts) {
  const QuadConfig cfg = effective_quad(sc, opts);
  const TSFunction& u = sc.function(sc.function_name);
  SeminormResult r = seminorm(u, sc.seminorm_params(), sc.timescale, cfg);
  const double lp = lp_norm(u, sc.p, sc.timescale, cfg);
  CommandResult res;
  const double wn = r.diverged ? kInf : lp + r.value;
  res.rows.push_back({sc.id, sc.alpha, sc.p, lp, r.value, wn, r.err_est, r.diverged});
  res.math_flag = r.diverged;
  return res;
}

CommandResult cmd_poincare(const Scenario& sc, const CliOptions& opts) {
  const QuadConfig cfg = effective_quad(sc, opts);
  const TSFunction& u = sc.function(sc.function_name);
  const SeminormParams prm = sc.seminorm_params();
  CommandResult res;

  PoincareMethod method = sc.method == "sampling" ? PoincareMethod::Sampling
                                                  : PoincareMethod::Eigensolve;

  // Mesh sweep when several sizes are given (one eigensolve per size).
  std::vector<std::vector<int>> meshes;
  if (method == PoincareMethod::Eigensolve && opts.mesh.size() > 1) {
    for (int n : opts.mesh) meshes.push_back({n});
  } else {
    meshes.push_back(effective_mesh(sc, opts));
  }

  std::vector<std::pair<double, double>> sweep_points;
  for (const auto& mesh : meshes) {
    PoincareOptions popts;
    popts.cells_per_interval = mesh;
    popts.samples = sc.samples;
    popts.seed = opts.seed ? *opts.seed : sc.seed;
    PoincareEstimate est = poincare_constant(prm, sc.timescale, method, popts, cfg);
    InequalityReport rep = poincare_check(u, prm, sc.timescale, est.value, cfg, sc.id);
    res.rows.push_back({sc.id, sc.alpha, sc.p,
                        method == PoincareMethod::Sampling ? std::string("sampling")
                                                           : std::string("eigensolve"),
                        join_ints(mesh), est.value, rep.lhs, rep.rhs, rep.ratio,
                        rep.holds, rep.err_est});
    if (!rep.holds) res.math_flag = true;
    if (!mesh.empty()) {
      sweep_points.push_back({static_cast<double>(mesh[0]), est.value});
    }
  }
  if (opts.svg && sweep_points.size() > 1) {
    const std::string path = opts.out_dir + "/poincare_" + sc.id + ".svg";
    SvgSeries s{"C_P estimate", sweep_points, true, true};
    write_svg_plot(path, "Poincare constant vs mesh size (" + sc.id + ")",
                   "cells per interval", "C_P", {s});
    res.artifacts.push_back(path);
  }
  return res;
}

CommandResult cmd_discrete_poincare(const Scenario& sc, const CliOptions& opts) {
  std::vector<double> weights;
  if (sc.weights) {
    weights = *sc.weights;
  } else {
    for (const Component& c : sc.timescale.components()) {
      weights.push_back(c.measure());
    }
  }
  DiscretePoincareConstant c1 = discrete_poincare_constant(
      weights, sc.p, opts.seed ? *opts.seed : sc.seed);
  CommandResult res;
  res.rows.push_back({sc.id, sc.p, join_doubles(weights), c1.value,
                      c1.certified_lower, c1.heuristic_upper});
  return res;
}

CommandResult cmd_cross_bounds(const Scenario& sc, const CliOptions& opts) {
  const QuadConfig cfg = effective_quad(sc, opts);
  const TSFunction& u = sc.function(sc.function_name);
  InequalityReport rep =
      cross_bounds_check(u, sc.seminorm_params(), sc.timescale, cfg, sc.id);
  const double kexp = 1.0 + sc.alpha * sc.p;
  CommandResult res;
  res.rows.push_back({sc.id, sc.alpha, sc.p, std::pow(sc.timescale.diam(), -kexp),
                      std::pow(sc.timescale.delta0(), -kexp), rep.lhs, rep.rhs,
                      rep.ratio, rep.holds, rep.err_est, rep.note});
  res.math_flag = !rep.holds;
  return res;
}

CommandResult cmd_coercivity(const Scenario& sc, const CliOptions& opts) {
  const QuadConfig cfg = effective_quad(sc, opts);
  const TSFunction& u = sc.function(sc.function_name);
  const SeminormParams prm = sc.seminorm_params();
  double constant;
  if (sc.constant) {
    constant = *sc.constant;
  } else {
    // max(C_P, measure^{1/p}) suffices; estimate C_P by the method at hand.
    PoincareOptions popts;
    popts.cells_per_interval = effective_mesh(sc, opts);
    popts.samples = sc.samples;
    popts.seed = opts.seed ? *opts.seed : sc.seed;
    const PoincareMethod method =
        sc.p == 2.0 ? PoincareMethod::Eigensolve : PoincareMethod::Sampling;
    const double c_p = poincare_constant(prm, sc.timescale, method, popts, cfg).value;
    constant = std::max(c_p, std::pow(sc.timescale.total_measure(), 1.0 / sc.p));
  }
  InequalityReport rep = coercivity_check(u, prm, sc.timescale, constant, cfg, sc.id);
  CommandResult res;
  res.rows.push_back({sc.id, sc.alpha, sc.p, rep.constant_used, rep.lhs, rep.rhs,
                      rep.ratio, rep.holds, rep.err_est});
  res.math_flag = !rep.holds;
  return res;
}

CommandResult cmd_hardy(const Scenario& sc, const CliOptions& opts) {
  const QuadConfig cfg = effective_quad(sc, opts);
  const TSFunction& u = sc.function(sc.function_name);
  const SeminormParams prm = sc.seminorm_params();
  const double beta = sc.beta ? *sc.beta : 0.5 * sc.alpha;
  const double x0 = sc.x0 ? *sc.x0 : sc.timescale.inf();
  InequalityReport rep = hardy_check(u, prm, beta, x0, sc.timescale, cfg, sc.id);
  CommandResult res;
  res.rows.push_back({sc.id, sc.alpha, sc.p, beta, x0, rep.lhs, rep.rhs, rep.ratio,
                      rep.constant_used, rep.holds, rep.err_est, rep.note});
  res.math_flag = !rep.holds;

  if (opts.svg) {
    std::vector<std::pair<double, double>> pts;
    for (int k = 0; k <= 9; ++k) {
      const double bk = sc.alpha * k / 10.0;
      InequalityReport rk = hardy_check(u, prm, bk, x0, sc.timescale, cfg, sc.id);
      if (std::isfinite(rk.ratio)) pts.push_back({bk, rk.ratio});
    }
    const std::string path = opts.out_dir + "/hardy_" + sc.id + ".svg";
    SvgSeries s{"lhs/[u]^p", pts, true, true};
    write_svg_plot(path, "Hardy ratio vs beta (" + sc.id + ")", "beta", "ratio", {s});
    res.artifacts.push_back(path);
  }
  return res;
}

CommandResult cmd_ckn(const Scenario& sc, const CliOptions& opts) {
  const QuadConfig cfg = effective_quad(sc, opts);
  const TSFunction& u = sc.function(sc.function_name);
  const SeminormParams prm = sc.seminorm_params();
  const double q = sc.q ? *sc.q : sc.p;
  const double theta = sc.theta ? *sc.theta : 0.5;
  const double beta = sc.beta ? *sc.beta : 0.5 * sc.alpha;
  const double x0 = sc.x0 ? *sc.x0 : sc.timescale.inf();
  InequalityReport rep = ckn_check(u, prm, q, theta, beta, x0, sc.timescale, cfg, sc.id);
  const double r = (theta == 1.0) ? sc.p
                 : (theta == 0.0) ? q
                                  : 1.0 / (theta / sc.p + (1.0 - theta) / q);
  CommandResult res;
  res.rows.push_back({sc.id, sc.alpha, sc.p, q, theta, beta, theta * beta, r, x0,
                      rep.lhs, rep.rhs, rep.ratio, rep.constant_used, rep.holds,
                      rep.err_est, rep.note});
  res.math_flag = !rep.holds;

  if (opts.svg) {
    std::vector<std::pair<double, double>> pts;
    for (int k = 0; k <= 10; ++k) {
      const double tk = k / 10.0;
      InequalityReport rk =
          ckn_check(u, prm, q, tk, beta, x0, sc.timescale, cfg, sc.id);
      if (std::isfinite(rk.ratio)) pts.push_back({tk, rk.ratio});
    }
    const std::string path = opts.out_dir + "/ckn_" + sc.id + ".svg";
    SvgSeries s{"lhs/rhs", pts, true, true};
    write_svg_plot(path, "CKN interpolation ratio vs theta (" + sc.id + ")", "theta",
                   "ratio", {s});
    res.artifacts.push_back(path);
  }
  return res;
}

CommandResult cmd_solve(const Scenario& sc, const CliOptions& opts) {
  const QuadConfig cfg = effective_quad(sc, opts);
  const TSFunction& f = sc.function(sc.rhs_name);
  const std::vector<int> mesh = effective_mesh(sc, opts);
  ModelSolution sol = solve_model_problem(f, sc.timescale, sc.alpha, mesh, cfg);

  CommandResult res;
  const std::string sol_csv = opts.out_dir + "/solution_" + sc.id + ".csv";
  {
    CsvTable table({"t", "u_h"});
    Basis basis = build_basis(sc.timescale, mesh);
    for (const auto& blk : basis.intervals) {
      for (int i = 0; i <= blk.cells; ++i) {
        table.add_row({blk.node(i), sol.coeffs(blk.first_index + i)});
      }
    }
    for (const auto& ab : basis.atoms) {
      table.add_row({ab.position, sol.coeffs(ab.index)});
    }
    table.write(sol_csv);
    res.artifacts.push_back(sol_csv);
  }
  res.rows.push_back({sc.id, sc.alpha, static_cast<long long>(sol.coeffs.size()),
                      join_ints(mesh), sol.residual, sol.energy, sol.projected,
                      fs::path(sol_csv).filename().string()});

  if (opts.matrices) {
    Basis basis = build_basis(sc.timescale, mesh);
    GalerkinSystem sys = assemble(sc.timescale, basis, sc.alpha, cfg);
    const std::string kp = opts.out_dir + "/stiffness_" + sc.id + ".mtx";
    const std::string mp = opts.out_dir + "/mass_" + sc.id + ".mtx";
    write_matrix_market(sys.K, kp);
    write_matrix_market(sys.M, mp);
    res.artifacts.push_back(kp);
    res.artifacts.push_back(mp);
  }
  if (opts.svg) {
    const std::string path = opts.out_dir + "/solve_" + sc.id + ".svg";
    write_svg_plot(path, "Galerkin minimizer (" + sc.id + ")", "t", "u_h(t)",
                   function_series(sol.u_h, sc.timescale));
    res.artifacts.push_back(path);
  }
  return res;
}

CommandResult cmd_compare_rl(const Scenario& sc, const CliOptions& opts) {
  const QuadConfig cfg = effective_quad(sc, opts);
  double a, b;
  if (sc.rl_a && sc.rl_b) {
    a = *sc.rl_a;
    b = *sc.rl_b;
  } else {
    const Component* first_interval = nullptr;
    for (const Component& c : sc.timescale.components()) {
      if (c.is_interval()) {
        first_interval = &c;
        break;
      }
    }
    if (!first_interval) {
      fail(ErrorCode::DomainError,
           "compare-rl needs an interval (or explicit rl_a/rl_b)");
    }
    a = first_interval->lo();
    b = first_interval->hi();
  }
  RLDemoReport rep = one_sided_gap_demo(a, b, sc.alpha, sc.p, cfg);
  CommandResult res;
  res.rows.push_back({sc.id, rep.a, rep.b, rep.alpha, rep.p,
                      rep.gagliardo_of_constant, rep.rl_norm_of_constant,
                      rep.rl_in_lp, rep.conclusion});
  return res;
}

CommandResult dispatch(const std::string& command, const Scenario& sc,
                       const CliOptions& opts) {
  if (command == "measure") return cmd_measure(sc, opts);
  if (command == "seminorm") return cmd_seminorm(sc, opts);
  if (command == "norm") return cmd_norm(sc, opts);
  if (command == "poincare") return cmd_poincare(sc, opts);
  if (command == "discrete-poincare") return cmd_discrete_poincare(sc, opts);
  if (command == "cross-bounds") return cmd_cross_bounds(sc, opts);
  if (command == "coercivity") return cmd_coercivity(sc, opts);
  if (command == "hardy") return cmd_hardy(sc, opts);
  if (command == "ckn") return cmd_ckn(sc, opts);
  if (command == "solve") return cmd_solve(sc, opts);
  if (command == "compare-rl") return cmd_compare_rl(sc, opts);
  fail(ErrorCode::DomainError, "unknown command " + command);
}

}  // namespace

CommandOutcome run_command(const std::string& command, const Scenario& scenario,
                           const CliOptions& opts) {
  fs::create_directories(opts.out_dir);
  CommandResult res = dispatch(command, scenario, opts);
  CsvTable table(header_for(command));
  for (auto& row : res.rows) table.add_row(std::move(row));
  const std::string csv_path = opts.out_dir + "/" + command + ".csv";
  table.write(csv_path);

  CommandOutcome out;
  out.exit_code = res.math_flag ? 2 : 0;
  out.artifacts.push_back(csv_path);
  for (auto& a : res.artifacts) out.artifacts.push_back(std::move(a));
  return out;
}

CommandOutcome run_report(const std::string& scenario_dir, const CliOptions& opts) {
  fs::create_directories(opts.out_dir);
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(scenario_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    fail(ErrorCode::ParseError, "no scenario files in " + scenario_dir);
  }

  std::map<std::string, CsvTable> tables;
  CsvTable index({"scenario_id", "command", "csv", "math_flag"});
  bool any_flag = false;
  CommandOutcome out;

  for (const std::string& file : files) {
    Scenario sc = parse_scenario(file);
    for (const std::string& command : sc.commands) {
      if (command == "report") continue;
      CommandResult res = dispatch(command, sc, opts);
      auto [it, inserted] = tables.try_emplace(command, header_for(command));
      for (auto& row : res.rows) it->second.add_row(std::move(row));
      index.add_row({sc.id, command, command + ".csv", res.math_flag});
      any_flag = any_flag || res.math_flag;
      for (auto& a : res.artifacts) out.artifacts.push_back(std::move(a));
    }
  }

  for (const auto& [command, table] : tables) {
    const std::string path = opts.out_dir + "/" + command + ".csv";
    table.write(path);
    out.artifacts.push_back(path);
  }
  const std::string index_path = opts.out_dir + "/index.csv";
  index.write(index_path);
  out.artifacts.push_back(index_path);
  out.exit_code = any_flag ? 2 : 0;
  return out;
}

}  // namespace tsgag
