#include "cmm/bruteforce.hpp"
#include "cmm/diagnostics.hpp"
#include "cmm/netflow.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

using namespace cmm;

namespace {

struct InstanceArgs {
  std::string zoo;
  std::string params = "{}";
  std::string file;
};

struct SolveArgs {
  std::string solver = "mgd";
  int outer = 0;
  int inner = 0;
  std::string delta_mode;
  double delta = 1e-3;
  double alpha = 0.0;
  double beta = 0.0;
  double epsilon = 1e-3;
  std::string inner_method = "gda";
  double inner_step = 0.0;
  bool no_reference = false;
  bool allow_large_alpha = false;
  std::vector<double> x0, y0;
  std::string out_csv, out_json;
};

void add_instance_opts(CLI::App* cmd, InstanceArgs& a) {
  cmd->add_option("--zoo", a.zoo, "zoo instance name (see zoo-list)");
  cmd->add_option("--params", a.params, "zoo parameters as a JSON object");
  cmd->add_option("--instance", a.file, "instance JSON file");
}

void add_solver_opts(CLI::App* cmd, SolveArgs& a) {
  cmd->add_option("--solver", a.solver, "mgd or d3-gda")->check(CLI::IsMember({"mgd", "d3-gda"}));
  cmd->add_option("--outer", a.outer, "outer iterations T");
  cmd->add_option("--inner", a.inner, "fixed inner iterations K (implies --delta-mode fixed_iters)");
  cmd->add_option("--delta-mode", a.delta_mode, "fixed, inverse_square or fixed_iters");
  cmd->add_option("--delta", a.delta, "inner accuracy for --delta-mode fixed");
  cmd->add_option("--alpha", a.alpha, "dual step (mgd) or x/lambda step (d3-gda); 0 = default");
  cmd->add_option("--beta", a.beta, "y step for d3-gda; 0 = default");
  cmd->add_option("--epsilon", a.epsilon, "stationarity target");
  cmd->add_option("--inner-method", a.inner_method, "gda, ogda or extragradient");
  cmd->add_option("--inner-step", a.inner_step, "inner step for both players; 0 = default");
  cmd->add_flag("--no-reference", a.no_reference, "skip reference solves for Q and G");
  cmd->add_flag("--allow-large-alpha", a.allow_large_alpha, "accept alpha > 1/L_G (warns)");
  cmd->add_option("--x0", a.x0, "starting x")->delimiter(',');
  cmd->add_option("--y0", a.y0, "starting y")->delimiter(',');
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

ProblemInstance load(const InstanceArgs& a, std::optional<std::uint64_t> seed) {
  if (a.zoo.empty() == a.file.empty()) throw ConfigError("give exactly one of --zoo or --instance");
  if (!a.file.empty()) return load_instance(a.file);
  Json params;
  try {
    params = Json::parse(a.params);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("--params: ") + e.what());
  }
  if (!params.is_object()) throw ConfigError("--params must be a JSON object");
  if (seed && !params.contains("seed")) params["seed"] = *seed;
  return zoo_instance(a.zoo, params);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write '" + path + "'");
  return os;
}

MgdConfig mgd_config(const SolveArgs& a) {
  MgdConfig c;
  if (a.outer > 0) c.T = a.outer;
  c.alpha = a.alpha;
  c.delta = a.delta;
  c.epsilon = a.epsilon;
  if (!a.delta_mode.empty()) c.delta_mode = delta_mode_from_string(a.delta_mode);
  if (a.inner > 0) {
    if (!a.delta_mode.empty() && c.delta_mode != DeltaMode::fixed_iters) {
      throw ConfigError("--inner needs --delta-mode fixed_iters");
    }
    c.delta_mode = DeltaMode::fixed_iters;
    c.inner_iters = a.inner;
  }
  c.inner.method = inner_method_from_string(a.inner_method);
  c.inner.step_x = c.inner.step_y = a.inner_step;
  c.reference = !a.no_reference;
  c.allow_large_alpha = a.allow_large_alpha;
  if (!a.x0.empty()) c.x0 = to_vector(a.x0);
  if (!a.y0.empty()) c.y0 = to_vector(a.y0);
  return c;
}

SolverTrace run_solver(const ProblemInstance& inst, const SolveArgs& a) {
  if (a.solver == "mgd") return mgd_run(inst, mgd_config(a));
  D3Config c;
  if (a.outer > 0) c.T = a.outer;
  c.alpha = a.alpha;
  c.beta = a.beta;
  if (!a.x0.empty()) c.x0 = to_vector(a.x0);
  if (!a.y0.empty()) c.y0 = to_vector(a.y0);
  return d3_gda_run(inst, c);
}

std::string vec_str(const Vector& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%.6g", i ? ", " : "", v[i]);
    s += buf;
  }
  return s + ")";
}

int cmd_solve(const ProblemInstance& inst, const SolveArgs& a) {
  const auto tr = run_solver(inst, a);
  if (tr.metadata.value("alpha_exceeds_1_over_LG", false)) {
    std::cerr << "warning: alpha exceeds 1/L_G; the rate bound does not apply\n";
  }
  const auto& last = tr.last();
  std::printf("%-10s %s\n", "instance", inst.name.c_str());
  std::printf("%-10s %s, %zu rows\n", "solver", tr.solver.c_str(), tr.rows.size());
  std::printf("%-10s %s\n", "x", vec_str(last.x).c_str());
  std::printf("%-10s %s\n", "y", vec_str(last.y).c_str());
  std::printf("%-10s %s\n", "lambda", vec_str(last.lambda).c_str());
  std::printf("%-10s %.3e\n", "max viol", last.max_violation);
  std::printf("%-10s %.3e\n", "comp gap", last.comp_gap);
  if (std::isfinite(last.q_norm)) std::printf("%-10s %.3e\n", "||Q||", last.q_norm);
  if (std::isfinite(last.p_xl)) std::printf("%-10s %.3e / %.3e\n", "P_xl/P_y", last.p_xl, last.p_y);
  if (!a.out_csv.empty()) {
    auto os = open_out(a.out_csv);
    write_trace_csv(tr, os);
  }
  if (!a.out_json.empty()) open_out(a.out_json) << trace_to_json(tr).dump(2) << '\n';
  return 0;
}

struct DiagnoseArgs {
  std::string point;
  std::vector<double> x, y, lambda;
  double eps = 1e-3;
  double delta = 1e-3;
  std::string out;
};

int cmd_diagnose(const ProblemInstance& inst, const DiagnoseArgs& d, const SolveArgs& a) {
  Vector x, y, lambda;
  std::optional<double> b_bar;
  double alpha = a.alpha;
  if (!d.point.empty()) {
    std::ifstream is(d.point);
    if (!is) throw ConfigError("cannot read '" + d.point + "'");
    Json j;
    try {
      j = Json::parse(is);
      x = vector_from_json(j.at("x"));
      y = vector_from_json(j.at("y"));
      lambda = vector_from_json(j.at("lambda"));
    } catch (const Json::exception& e) {
      throw ConfigError(d.point + ": " + e.what());
    }
  } else if (!d.x.empty() || !d.y.empty() || !d.lambda.empty()) {
    x = to_vector(d.x);
    y = to_vector(d.y);
    lambda = to_vector(d.lambda);
  } else {
    const auto tr = mgd_run(inst, mgd_config(a));
    x = tr.last().x;
    y = tr.last().y;
    lambda = tr.last().lambda;
    b_bar = tr.lambda_sup();
    alpha = tr.metadata.at("alpha").get<double>();
  }
  if (!(alpha > 0.0)) alpha = 0.9 / dual_constants(inst).L_G;
  const auto rep = stationarity_report(inst, x, y, lambda, d.eps, d.delta, alpha, b_bar);
  std::cout << report_table(rep);
  if (!d.out.empty()) open_out(d.out) << report_to_json(rep).dump(2) << '\n';
  return 0;
}

int cmd_relations(int points) {
  GridSpec g;
  if (points > 0) g.points_per_dim = points;
  const auto rep = relations_check(relations_suite(), g);
  std::cout << rep.table();
  return rep.ok() ? 0 : 1;
}

struct DualityArgs {
  int points = 0;
  double lambda_max = 10.0;
  int lambda_points = 21;
  std::string out;
};

int cmd_duality(const ProblemInstance& inst, const DualityArgs& a) {
  GridSpec g;
  if (a.points > 0) g.points_per_dim = a.points;
  const double primal = value_mMI(inst, g);
  const double dual_max = value_MmI(inst, g);
  const auto dv = value_duals(inst, g, a.lambda_max, a.lambda_points);
  const double tol = grid_tolerance(inst, g);
  const auto fs = feasibility_check(inst, 32, 7);
  const bool weak = primal <= dv.v_D2 + tol;
  const bool strong = std::abs(primal - dv.v_D2) <= 2.0 * tol;
  std::printf("%-16s %s\n", "instance", inst.name.c_str());
  std::printf("%-16s %12.6f\n", "min-max (inner)", primal);
  std::printf("%-16s %12.6f\n", "max-min (inner)", dual_max);
  std::printf("%-16s %12.6f\n", "dual D1", dv.v_D1);
  std::printf("%-16s %12.6f\n", "dual D2", dv.v_D2);
  std::printf("%-16s %12.6f\n", "dual D3", dv.v_D3);
  std::printf("%-16s %12.3e\n", "grid tolerance", tol);
  std::printf("%-16s %12.3e\n", "Slater margin", fs.slater_margin);
  std::printf("%-16s %s\n", "weak duality", weak ? "holds" : "VIOLATED");
  std::printf("%-16s %s\n", "zero gap", strong ? "yes" : "no");
  if (!a.out.empty()) {
    Json j = {{"instance", inst.name},     {"mMI", primal},   {"MmI", dual_max},
              {"D1", dv.v_D1},             {"D2", dv.v_D2},   {"D3", dv.v_D3},
              {"tolerance", tol},          {"weak", weak},    {"zero_gap", strong},
              {"slater_margin", detail::number_to_json(fs.slater_margin)}};
    open_out(a.out) << j.dump(2) << '\n';
  }
  return weak ? 0 : 1;
}

struct BenchArgs {
  ExperimentSpec spec;
  std::string cost_model = "congested";
  std::string out;
};

int cmd_bench(BenchArgs b, std::optional<std::uint64_t> seed) {
  if (seed) b.spec.seed = *seed;
  b.spec.attack.evaluation = cost_model_from_string(b.cost_model);
  const auto res = run_experiment(b.spec);
  std::printf("%8s  %-13s %4s %4s %10s %10s %10s\n", "budget", "method", "ok", "fail", "rho_mean",
              "rho_min", "rho_max");
  for (const auto& r : res.rows) {
    std::printf("%8g  %-13s %4d %4d %10.4f %10.4f %10.4f\n", r.budget, r.method.c_str(),
                r.trials_ok, r.trials_failed, r.rho_mean, r.rho_min, r.rho_max);
  }
  if (!b.out.empty()) {
    auto os = open_out(b.out);
    write_experiment_csv(res, os);
  }
  for (const auto& r : res.rows) {
    if (r.trials_ok == 0) return 1;
  }
  return 0;
}

void print_version() {
  const MgdConfig m;
  const D3Config d;
  const InnerSolverConfig in;
  const GridSpec g;
  const AttackConfig at;
  const ExperimentSpec ex;
  std::printf("cmm %s\n\ndefaults\n", kVersion);
  auto row = [](const char* k, const std::string& v) { std::printf("  %-22s %s\n", k, v.c_str()); };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return std::string(buf);
  };
  row("mgd.alpha", "0.9 / L_G");
  row("mgd.T", num(m.T));
  row("mgd.delta_mode", to_string(m.delta_mode));
  row("mgd.delta", num(m.delta));
  row("mgd.inner_iters", num(m.inner_iters));
  row("mgd.epsilon", num(m.epsilon));
  row("inner.method", to_string(in.method));
  row("inner.max_iters", num(in.max_iters));
  row("inner.target_residual", num(in.target_residual));
  row("d3.alpha", "min(1/(2 L_x), 1/(2 sigma_max))");
  row("d3.beta", "1/(2 L_y)");
  row("d3.T", num(d.T));
  row("grid.points_per_dim", num(g.points_per_dim));
  row("grid.argmax_tol", num(g.argmax_tolerance));
  row("flow.eta", num(at.eta));
  row("flow.T", num(at.T));
  row("flow.inner_iters", num(at.inner_iters));
  row("flow.step", num(at.step));
  row("flow.cost_model", to_string(at.evaluation));
  row("bench.nodes", num(ex.nodes));
  row("bench.edge_prob", num(ex.edge_prob));
  row("bench.demand_pct", num(ex.demand_pct));
  row("bench.trials", num(ex.trials));
}

// Values from --config fill every option of the chosen command that was not
// given on the command line.
void merge_config(CLI::App& app, CLI::App* cmd, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config '" + path + "'");
  Json j;
  try {
    j = Json::parse(is);
  } catch (const Json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError(path + ": expected a JSON object");
  for (const auto& [key, val] : j.items()) {
    std::string name = "--" + key;
    std::replace(name.begin(), name.end(), '_', '-');
    CLI::Option* opt = nullptr;
    for (CLI::App* scope : {cmd, &app}) {
      try {
        opt = scope->get_option(name);
        break;
      } catch (const CLI::OptionNotFound&) {
      }
    }
    if (!opt) throw ConfigError(path + ": unknown key '" + key + "'");
    if (opt->count() > 0) continue;
    auto text = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    if (val.is_array()) {
      for (const auto& e : val) opt->add_result(text(e));
    } else if (val.is_object()) {
      opt->add_result(val.dump());
    } else {
      opt->add_result(text(val));
    }
    opt->run_callback();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimax solvers with coupled linear constraints"};
  app.require_subcommand(0, 1);
  bool version = false;
  std::uint64_t seed = 0;
  std::string config;
  app.add_flag("--version", version, "print version and default constants");
  auto* seed_opt = app.add_option("--seed", seed, "seed for every random draw");
  app.add_option("--config", config, "JSON file of option values (flags win)");

  InstanceArgs inst_args;
  SolveArgs solve_args;

  auto* solve = app.add_subcommand("solve", "run MGD or D3-GDA and write the trace");
  add_instance_opts(solve, inst_args);
  add_solver_opts(solve, solve_args);
  solve->add_option("--out-csv", solve_args.out_csv, "trace CSV path");
  solve->add_option("--out-json", solve_args.out_json, "trace JSON path");

  DiagnoseArgs diag_args;
  auto* diagnose = app.add_subcommand("diagnose", "stationarity report for a point or an MGD run");
  add_instance_opts(diagnose, inst_args);
  add_solver_opts(diagnose, solve_args);
  diagnose->add_option("--point", diag_args.point, "JSON file with x, y, lambda");
  diagnose->add_option("--x", diag_args.x)->delimiter(',');
  diagnose->add_option("--y", diag_args.y)->delimiter(',');
  diagnose->add_option("--lambda", diag_args.lambda)->delimiter(',');
  diagnose->add_option("--eps", diag_args.eps, "claimed stationarity");
  diagnose->add_option("--claimed-delta", diag_args.delta, "claimed inner accuracy");
  diagnose->add_option("--out", diag_args.out, "report JSON path");

  int rel_points = 0;
  auto* relations = app.add_subcommand("check-relations", "value relations among the four problems");
  relations->add_option("--points", rel_points, "grid points per dimension");

  DualityArgs dual_args;
  auto* duality = app.add_subcommand("check-duality", "grid check of weak and strong duality");
  add_instance_opts(duality, inst_args);
  duality->add_option("--points", dual_args.points, "grid points per dimension");
  duality->add_option("--lambda-max", dual_args.lambda_max, "multiplier grid upper end");
  duality->add_option("--lambda-points", dual_args.lambda_points, "multiplier grid points");
  duality->add_option("--out", dual_args.out, "JSON path");

  BenchArgs bench_args;
  auto& sp = bench_args.spec;
  auto* bench = app.add_subcommand("bench-flow", "network-flow attack experiment");
  bench->add_option("--nodes", sp.nodes);
  bench->add_option("--edge-prob", sp.edge_prob);
  bench->add_option("--demand-pct", sp.demand_pct);
  bench->add_option("--budgets", sp.budgets)->delimiter(',');
  bench->add_option("--methods", sp.methods)->delimiter(',');
  bench->add_option("--trials", sp.trials);
  bench->add_option("--threads", sp.threads);
  bench->add_option("--eta", sp.attack.eta, "regularization on the attack");
  bench->add_option("--outer", sp.attack.T, "outer iterations for mgd and d3-gda");
  bench->add_option("--inner", sp.attack.inner_iters, "inner iterations for mgd");
  bench->add_option("--step", sp.attack.step);
  bench->add_option("--cost-model", bench_args.cost_model, "congested or capacity_only");
  bench->add_option("--out", bench_args.out, "results CSV path");

  app.add_subcommand("zoo-list", "list zoo instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (version) {
      print_version();
      return 0;
    }
    CLI::App* cmd = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front();
    if (!cmd) {
      std::cout << app.help();
      return 2;
    }
    if (!config.empty()) merge_config(app, cmd, config);
    std::optional<std::uint64_t> s;
    if (seed_opt->count() > 0) s = seed;
    const std::string name = cmd->get_name();
    if (name == "zoo-list") {
      for (const auto& [n, desc] : zoo_catalog()) std::printf("%-20s %s\n", n.c_str(), desc.c_str());
      return 0;
    }
    if (name == "check-relations") return cmd_relations(rel_points);
    if (name == "bench-flow") return cmd_bench(bench_args, s);
    const auto inst = load(inst_args, s);
    if (name == "solve") return cmd_solve(inst, solve_args);
    if (name == "diagnose") return cmd_diagnose(inst, diag_args, solve_args);
    if (name == "check-duality") return cmd_duality(inst, dual_args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const CLI::ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
