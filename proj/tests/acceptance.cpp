// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance            run everything
//   acceptance 3 10a      run selected criteria

#include "cmm/bruteforce.hpp"
#include "cmm/diagnostics.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>

using namespace cmm;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double inf_dist(const Vector& a, double a0, const Vector& b, double b0) {
  return std::max(std::abs(a[0] - a0), std::abs(b[0] - b0));
}

MgdConfig demo_config() {
  MgdConfig c;
  c.alpha = 0.5;
  c.allow_large_alpha = true;
  c.T = 50;
  c.delta_mode = DeltaMode::fixed_iters;
  c.inner_iters = 5;
  c.inner.step_x = c.inner.step_y = 0.5;
  c.reference = false;
  return c;
}

Outcome c1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto inst = zoo_instance("eq23-divergence");
  MgdConfig c = demo_config();
  const auto a = mgd_run(inst, c).last();
  c.x0 = Vector::Constant(1, 0.5);
  c.y0 = Vector::Constant(1, -0.5);
  const auto b = mgd_run(inst, c).last();
  const double e_a = inf_dist(a.x, 0.0, a.y, -1.0);
  const double e_b = inf_dist(b.x, 0.0, b.y, -1.0);
  const auto gda = primal_gda_run(inst, PrimalMethod::gda, 0.5, 200, Vector::Zero(1), Vector::Zero(1));
  const double ogda_step = default_inner_steps(inst, InnerMethod::ogda).first;
  const auto ogda =
      primal_gda_run(inst, PrimalMethod::ogda, ogda_step, 400, Vector::Zero(1), Vector::Zero(1));
  const double e_g = inf_dist(gda.x, 0.5, gda.y, -0.5);
  const double e_o = inf_dist(ogda.x, 0.5, ogda.y, -0.5);
  const double secs = seconds_since(t0);
  const bool pass = e_a <= 1e-2 && e_b <= 1e-2 && e_g <= 1e-2 && e_o <= 1e-2 && secs < 1.0;
  return {pass, fmt("MGD err %.2e / %.2e (spurious start); primal GDA->(0.5,-0.5) err %.2e, "
                    "OGDA(step %.3f) err %.2e; %.2fs",
                    e_a, e_b, e_g, ogda_step, e_o, secs)};
}

Outcome c2() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rep = relations_check(relations_suite(), GridSpec{});
  const auto& v = rep.values;
  using P = Problem;
  auto val = [&](int inst, P p) { return v[inst].v[static_cast<int>(p)]; };
  struct Known {
    int inst;
    P p;
    double want;
  };
  const std::vector<Known> known = {
      {0, P::mMI, -1.0}, {0, P::mMO, 1.0},  {0, P::MmI, 1.0},  {0, P::MmO, -1.0},
      {1, P::mMI, -3.0}, {1, P::MmO, -1.0}, {2, P::MmI, 3.0},  {2, P::mMO, 1.0}};
  double worst = 0.0;
  for (const auto& c : known) worst = std::max(worst, std::abs(val(c.inst, c.p) - c.want));
  // v(mM-I) = −1 vs v(Mm-I) = 1 is P1 again.
  const double secs = seconds_since(t0);
  const bool pass = worst <= 0.05 && rep.ok() && secs < 10.0;
  std::cout << rep.table();
  return {pass, fmt("max |value - known| = %.4f, relations ok = %d, %.2fs", worst, rep.ok(), secs)};
}

Outcome c3() {
  double worst_ratio = 0.0;
  double worst_weak = -1e300;
  double worst_agree = 0.0;
  double min_margin = 1e300;
  bool ok = true;
  for (int i = 0; i < 20; ++i) {
    const int d = 1 + i % 2;
    const auto inst = zoo_instance("random-quadratic", {{"n", d}, {"m", d}, {"k", d}, {"seed", 100 + i}});
    min_margin = std::min(min_margin, feasibility_check(inst, 32, 7).slater_margin);
    MgdConfig c;
    c.T = 4000;
    c.delta = 1e-4;
    c.reference = false;
    const double lmax = std::max(4.0 * mgd_run(inst, c).lambda_sup(), 10.0);
    GridSpec g;
    g.points_per_dim = d == 1 ? 201 : 21;
    const int lp = g.points_per_dim;
    const double v = value_mMI(inst, g);
    const auto dv = value_duals(inst, g, lmax, lp);
    const double cell = grid_tolerance(inst, g);
    const double tol = 2.0 * cell;
    worst_agree = std::max({worst_agree, std::abs(dv.v_D1 - dv.v_D2), std::abs(dv.v_D1 - dv.v_D3)});
    worst_weak = std::max(worst_weak, v - dv.v_D2 - tol);
    worst_ratio = std::max(worst_ratio, std::abs(v - dv.v_D2) / (2.0 * tol));
    ok = ok && v <= dv.v_D2 + tol && std::abs(v - dv.v_D2) <= 2.0 * tol;
  }
  ok = ok && worst_agree <= 1e-12 && min_margin > 0.0;

  const auto e3 = zoo_instance("example3-dual");
  GridSpec g3;
  g3.points_per_dim = 201;
  const auto sets = inner_solution_sets(e3, Vector::Zero(1), g3, 2.0, 21);
  const bool dual_ok = sets.dual.size() == 1 && std::abs(sets.dual[0].first[0] - 1.0) < 1e-12 &&
                       sets.dual[0].second[0] == 0.0;
  std::size_t primal_hits = 0;
  for (const auto& [y, l] : sets.primal) {
    if (std::abs(y[0] - 1.0) < 1e-12) ++primal_hits;
  }
  const bool primal_ok = primal_hits == sets.lambda_grid_size;
  return {ok && dual_ok && primal_ok,
          fmt("20 instances: max |mMI-D2|/(2 tol) = %.3f, weak slack %.2e, dual spread %.1e, "
              "Slater margin >= %.3f; x=0 inner dual set {(1,0)} %s, primal (1,lambda) %zu/%zu",
              worst_ratio, worst_weak, worst_agree, min_margin, dual_ok ? "yes" : "NO",
              primal_hits, sets.lambda_grid_size)};
}

Outcome c4() {
  double worst_G = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int d = 1 + i % 2;
    const auto inst = zoo_instance("random-quadratic", {{"n", d + 1}, {"m", d}, {"k", d}, {"seed", 400 + i}});
    Rng rng(900 + i);
    const Vector lam = rng.uniform_vector(inst.k(), 0.5, 1.5);
    const auto ref = reference_inner_config(inst);
    const Vector g = grad_G(inst, lam, ref).g;
    const Vector fd = oracle::central_difference(
        [&](const Vector& l) { return grad_G(inst, l, ref).value; }, lam, 1e-5);
    worst_G = std::max(worst_G, (g - fd).norm() / std::max(g.norm(), 1e-6));
  }
  double worst_L = 0.0;
  std::string worst_name;
  std::vector<ProblemInstance> zoo;
  for (const auto& [name, desc] : zoo_catalog()) zoo.push_back(zoo_instance(name));
  zoo.push_back(zoo_instance("jamming", {{"eta", 0.1}}));
  for (const auto& inst : zoo) {
    Rng rng(31);
    for (int s = 0; s < 100; ++s) {
      const Vector x = sample_in(inst.set_x, rng.uniform_vector(inst.n(), 0.0, 1.0));
      const Vector y = sample_in(inst.set_y, rng.uniform_vector(inst.m(), 0.0, 1.0));
      const Vector lam = rng.uniform_vector(inst.k(), 0.0, 2.0);
      const auto g = lagrangian_grads(inst, x, y, lam);
      const Vector gx = oracle::central_difference(
          [&](const Vector& v) { return lagrangian_eval(inst, v, y, lam); }, x);
      const Vector gy = oracle::central_difference(
          [&](const Vector& v) { return lagrangian_eval(inst, x, v, lam); }, y);
      const Vector gl = oracle::central_difference(
          [&](const Vector& v) { return lagrangian_eval(inst, x, y, v); }, lam);
      const double num = std::sqrt((g.gx - gx).squaredNorm() + (g.gy - gy).squaredNorm() +
                                   (g.glambda - gl).squaredNorm());
      const double den = std::max(1.0, std::sqrt(g.gx.squaredNorm() + g.gy.squaredNorm() +
                                                 g.glambda.squaredNorm()));
      if (num / den > worst_L) {
        worst_L = num / den;
        worst_name = inst.name;
      }
    }
  }
  return {worst_G <= 1e-4 && worst_L <= 1e-5,
          fmt("grad_G max rel err %.2e (20 instances); lagrangian_grads max rel err %.2e (%zu zoo "
              "instances, worst %s)",
              worst_G, worst_L, zoo.size(), worst_name.c_str())};
}

// Coupled zoo quadratics that are strongly convex-concave and inner feasible
// for every sampled x.
std::vector<ProblemInstance> rate_instances() {
  std::vector<ProblemInstance> all;
  for (const auto& [name, desc] : zoo_catalog()) all.push_back(zoo_instance(name));
  all.push_back(zoo_instance("prop1-quadratic", {{"x_iv", {-1, 1}}, {"y_iv", {0, 2}}}));
  all.push_back(zoo_instance("prop1-quadratic", {{"x_iv", {1, 2}}, {"y_iv", {-1, 0}}}));
  for (int s = 1; s <= 4; ++s) {
    all.push_back(zoo_instance("random-quadratic", {{"n", s % 2 + 1}, {"m", 2}, {"k", 2}, {"seed", s}}));
  }
  std::vector<ProblemInstance> out;
  for (auto& inst : all) {
    if (!inst.quadratic || !inst.constants.strongly_convex_concave()) continue;
    if (!(inst.coupling.sigma_max() > 0.0)) continue;
    if (!feasibility_check(inst, 32, 3).feasible(1e-8)) continue;
    out.push_back(std::move(inst));
  }
  return out;
}

Outcome c5() {
  const auto insts = rate_instances();
  double worst = 0.0;
  int runs = 0;
  bool ok = true;
  std::string names;
  for (const auto& inst : insts) {
    names += (names.empty() ? "" : ",") + inst.name;
    const auto dc = dual_constants(inst);
    for (double delta : {1e-2, 1e-3}) {
      MgdConfig c;
      c.T = 200;
      c.delta = delta;
      const auto rep = rate_report(mgd_run(inst, c), dc);
      for (int T : {10, 50, 200}) {
        const double m = *rep.measured_at(T);
        const double b = *rep.bound_at(T);
        worst = std::max(worst, m / b);
        ok = ok && m <= b;
        ++runs;
      }
    }
  }
  return {ok && !insts.empty(), fmt("%d (instance, delta, T) checks over [%s]; max measured/bound = %.3g",
                                    runs, names.c_str(), worst)};
}

Outcome c6() {
  const auto inst = zoo_instance("eq23-divergence");
  MgdConfig c;
  c.T = 500;
  c.delta_mode = DeltaMode::inverse_square;
  const auto tr = mgd_run(inst, c);
  std::size_t best = 0;
  for (std::size_t r = 0; r < tr.rows.size(); ++r) {
    if (tr.rows[r].q_norm < tr.rows[best].q_norm) best = r;
  }
  const double q = tr.rows[best].q_norm;
  const double comp = tr.rows[best].comp_gap;
  // A bounded, settling trace rises far less over its second half than over
  // its first; steady growth rises about as much in both.
  const std::size_t half = tr.rows.size() / 2;
  auto rise = [&](std::size_t from, std::size_t to) {
    double hi = tr.rows[from].lambda_norm;
    for (std::size_t r = from; r < to; ++r) hi = std::max(hi, tr.rows[r].lambda_norm);
    return hi - tr.rows[from].lambda_norm;
  };
  const double first = rise(0, half);
  const double second = rise(half, tr.rows.size());
  const bool ok = q < 1e-3 && comp < 1e-3 && std::isfinite(tr.lambda_sup()) &&
                  second <= 0.1 * first + 1e-9;
  return {ok, fmt("best ||Q|| %.2e at r=%zu, comp gap there %.2e; sup ||lambda|| %.4f, rise over "
                  "first half %.3e, over final half %.3e",
                  q, best, comp, tr.lambda_sup(), first, second)};
}

Outcome c7() {
  int converged = 0;
  int certified = 0;
  std::string failed;
  auto check_run = [&](const std::string& label, const ProblemInstance& inst, const SolverTrace& tr,
                       double eps, double delta) {
    const auto& last = tr.last();
    const double alpha = tr.metadata.at("alpha").get<double>();
    const auto rep = stationarity_report(inst, last.x, last.y, last.lambda, eps, delta, alpha,
                                         tr.lambda_sup());
    const bool conv = rep.find("stationarity_q")->pass && rep.find("stationarity_d")->pass;
    if (!conv) return;
    ++converged;
    if (rep.consequences_pass()) {
      ++certified;
    } else {
      failed += label + " ";
    }
  };
  const auto eq23 = zoo_instance("eq23-divergence");
  {
    MgdConfig c;
    c.T = 2000;
    c.delta = 1e-3;
    check_run("eq23-fixed", eq23, mgd_run(eq23, c), 1e-3, 1e-3);
    c.T = 500;
    c.delta_mode = DeltaMode::inverse_square;
    check_run("eq23-schedule", eq23, mgd_run(eq23, c), 1e-3, 1e-3);
  }
  for (int s = 0; s < 6; ++s) {
    const auto inst = zoo_instance("random-quadratic", {{"n", 2}, {"m", 2}, {"k", 1 + s % 2}, {"seed", 50 + s}});
    MgdConfig c;
    c.T = 3000;
    c.delta = 1e-4;
    check_run("random-" + std::to_string(50 + s), inst, mgd_run(inst, c), 1e-3, 1e-3);
  }

  // Constructed failure: row 0 (y <= 0.2) is active, row 1 (x + y <= 5) is
  // slack; inflating the slack row's multiplier must be flagged.
  const auto cf = zoo_instance("custom-quadratic", {{"P", {{2.0}}}, {"S", {{2.0}}}, {"q", {2.0}},
                                                   {"A", {{0.0}, {1.0}}}, {"B", {{1.0}, {1.0}}},
                                                   {"c", {0.2, 5.0}}, {"label", "constructed-failure"}});
  MgdConfig c;
  c.T = 3000;
  c.delta = 1e-4;
  const auto tr = mgd_run(cf, c);
  const auto& last = tr.last();
  const double alpha = tr.metadata.at("alpha").get<double>();
  const auto good = stationarity_report(cf, last.x, last.y, last.lambda, 1e-3, 1e-3, alpha, tr.lambda_sup());
  Vector bad_lambda = last.lambda;
  bad_lambda[1] += 0.1;
  const auto bad = stationarity_report(cf, last.x, last.y, bad_lambda, 1e-3, 1e-3, alpha,
                                       std::max(tr.lambda_sup(), bad_lambda.norm()));
  const bool flagged = !bad.all_pass() && !bad.find("comp_lower[1]")->pass;
  const bool ok = converged >= 4 && certified == converged && good.all_pass() && flagged;
  return {ok, fmt("%d/%d converged runs satisfy every violation/complementarity bound%s; constructed "
                  "failure: clean point passes %d, perturbed lambda flagged %d (comp gap %.3f vs "
                  "lower bound %.3f)",
                  certified, converged, failed.empty() ? "" : (" (failed: " + failed + ")").c_str(),
                  good.all_pass(), flagged, bad.comp_gap[1], -bad.find("comp_lower[1]")->bound)};
}

Outcome c8() {
  Rng rng(8);
  double worst_vi = 0.0, worst_idem = 0.0, worst_contract = 0.0, worst_member = 0.0;
  const Vector lo3 = (Vector(3) << -1.0, 0.0, -0.5).finished();
  const Vector hi3 = (Vector(3) << 1.0, 2.0, 0.5).finished();
  Matrix Cf(1, 4);
  Cf << 1.0, 1.0, -1.0, 0.5;
  const std::vector<std::pair<std::string, ConvexSet>> sets = {
      {"box", ConvexSet::box(lo3, hi3)},
      {"simplex-eq", ConvexSet::simplex(1.5, SimplexMode::eq, Vector::Zero(4), Vector::Constant(4, 0.8))},
      {"simplex-le", ConvexSet::simplex(1.0, SimplexMode::le, Vector::Zero(3), Vector::Constant(3, 0.7))},
      {"orthant", ConvexSet::orthant(3)},
      {"ball", ConvexSet::ball(Vector::Constant(3, 0.3), 1.2)},
      {"box-affine", ConvexSet::polytope(4, {Box{Vector::Zero(4), Vector::Ones(4)},
                                             AffineEquality(Cf, Vector::Constant(1, 0.7))})},
      {"box-halfspace", ConvexSet::polytope(3, {Box{lo3, hi3}, Halfspace{Vector::Ones(3), 0.4}})},
  };
  for (const auto& [name, set] : sets) {
    const Eigen::Index n = set.dim();
    for (int s = 0; s < 10000; ++s) {
      const Vector u = 3.0 * rng.normal_vector(n);
      const Vector v = 3.0 * rng.normal_vector(n);
      const Vector pu = project(set, u);
      const Vector pv = project(set, v);
      worst_member = std::max(worst_member, membership_residual(set, pu));
      worst_idem = std::max(worst_idem, (project(set, pu) - pu).norm());
      worst_contract = std::max(worst_contract, (pu - pv).norm() - (u - v).norm());
      // pv is a point of the set, so it serves as the comparison point z.
      worst_vi = std::max(worst_vi, (u - pu).dot(pv - pu));
    }
  }
  // Exhaustive active-set oracle on polytopes and capped simplices, dims <= 4.
  double worst_oracle = 0.0;
  for (int s = 0; s < 300; ++s) {
    const Eigen::Index n = 2 + s % 3;
    const Vector lo = -rng.uniform_vector(n, 0.2, 1.0);
    const Vector hi = rng.uniform_vector(n, 0.2, 1.0);
    const auto [Gb, hb] = oracle::box_rows(lo, hi);
    const Vector v = 2.0 * rng.normal_vector(n);
    // box ∩ {aᵀx = b}
    Matrix C = rng.normal_matrix(1, n);
    const Vector x0 = lo + (hi - lo).cwiseProduct(rng.uniform_vector(n, 0.2, 0.8));
    const Vector d = C * x0;
    const Vector p1 = project(ConvexSet::polytope(n, {Box{lo, hi}, AffineEquality(C, d)}), v);
    worst_oracle = std::max(worst_oracle, (p1 - oracle::active_set_projection(v, C, d, Gb, hb)).norm());
    // box ∩ halfspace
    const Vector a = rng.normal_vector(n);
    const double b = a.dot(x0);
    Matrix G(Gb.rows() + 1, n);
    G << Gb, a.transpose();
    Vector h(hb.size() + 1);
    h << hb, b;
    const Vector p2 = project(ConvexSet::polytope(n, {Box{lo, hi}, Halfspace{a, b}}), v);
    worst_oracle = std::max(worst_oracle,
                            (p2 - oracle::active_set_projection(v, Matrix(0, n), Vector(0), G, h)).norm());
    // capped simplex {0 <= x <= cap, Σx = budget}
    const Vector cap = rng.uniform_vector(n, 0.3, 1.0);
    const double budget = 0.5 * cap.sum();
    const auto [Gs, hs] = oracle::box_rows(Vector::Zero(n), cap);
    const Vector p3 = project(ConvexSet::simplex(budget, SimplexMode::eq, Vector::Zero(n), cap), v);
    worst_oracle = std::max(worst_oracle, (p3 - oracle::active_set_projection(v, Matrix::Ones(1, n),
                                                                              Vector::Constant(1, budget), Gs, hs)).norm());
  }
  // Flow polytope of a 4-node network (5 edges) against the same oracle.
  {
    FlowNetwork net;
    net.nodes = 4;
    net.edges = {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}};
    net.p = (Vector(5) << 1.0, 1.2, 0.5, 0.8, 1.1).finished();
    net.w = Vector::Ones(5);
    net.s = 0;
    net.t = 3;
    net.demand = 1.0;
    const auto eq = flow_equalities(net);
    const auto [Gb, hb] = oracle::box_rows(Vector::Zero(5), net.p);
    const ConvexSet X = flow_polytope(net, net.p);
    for (int s = 0; s < 100; ++s) {
      const Vector v = rng.normal_vector(5);
      worst_oracle = std::max(worst_oracle, (project(X, v) - oracle::active_set_projection(
                                                                 v, eq.C(), eq.d(), Gb, hb)).norm());
    }
  }
  const bool ok = worst_member <= 1e-9 && worst_idem <= 1e-9 && worst_contract <= 1e-9 &&
                  worst_vi <= 1e-9 && worst_oracle <= 1e-8;
  return {ok, fmt("%zu set types x 1e4 inputs: membership %.1e, idempotence %.1e, contraction "
                  "excess %.1e, VI %.1e; active-set oracle max diff %.1e",
                  sets.size(), worst_member, worst_idem, worst_contract, worst_vi, worst_oracle)};
}

Outcome c9() {
  const auto t0 = std::chrono::steady_clock::now();
  bool dominance = true;
  bool random_small = true;
  std::string detail;
  for (double eta : {0.05, 0.1, 0.2}) {
    ExperimentSpec spec;
    spec.nodes = 15;
    spec.edge_prob = 1.0;
    spec.demand_pct = 20.0;
    spec.budgets = {8.0};
    spec.methods = {"mgd", "greedy", "max_capacity", "random"};
    spec.trials = 15;
    spec.seed = 2024;
    spec.attack.eta = eta;
    const auto res = run_experiment(spec);
    auto mean = [&](const char* m) {
      const auto* r = find_row(res, 8.0, m);
      return r && r->trials_failed == 0 ? r->rho_mean : std::numeric_limits<double>::quiet_NaN();
    };
    const double mgd = mean("mgd"), gr = mean("greedy"), mc = mean("max_capacity"), rn = mean("random");
    dominance = dominance && mgd >= gr && mgd >= mc && mgd >= rn;
    random_small = random_small && rn <= 0.05;
    detail += fmt("eta=%.2f: mgd %.4f greedy %.4f max_cap %.4f random %.4f; ", eta, mgd, gr, mc, rn);
  }
  const double secs = seconds_since(t0);
  detail += fmt("dominance %s, random <= 0.05 %s, %.1fs", dominance ? "holds" : "FAILS",
                random_small ? "holds" : "FAILS", secs);
  return {dominance && random_small && secs < 300.0, detail};
}

Outcome c10a() {
  const auto net = oracle::toy_network();
  const auto best = oracle::toy_best_attack(net, 1.0);
  AttackConfig cfg;
  const auto mgd = run_attack(net, 1.0, "mgd", cfg, Rng(1));
  const auto greedy = run_attack(net, 1.0, "greedy", cfg, Rng(1));
  const bool ok = std::abs(mgd.rho - best.rho) <= 1e-4 && std::abs(greedy.rho - best.rho) <= 1e-4;
  return {ok, fmt("exhaustive best attack y=(%.3f,%.3f) rho=%.6f; mgd rho=%.6f, greedy rho=%.6f",
                  best.y[0], best.y[1], best.rho, mgd.rho, greedy.rho)};
}

Outcome c10b() {
  const auto net = oracle::toy_network();
  AttackConfig cfg;
  const auto mgd = run_attack(net, 1.0, "mgd", cfg, Rng(1));
  const auto greedy = run_attack(net, 1.0, "greedy", cfg, Rng(1));
  const bool ok = std::abs(mgd.rho - 1.0) <= 1e-4 && std::abs(greedy.rho - 1.0) <= 1e-4;
  return {ok, fmt("literal target rho = 1: mgd rho=%.6f, greedy rho=%.6f (clean cost %.6f, attacked %.6f)",
                  mgd.rho, greedy.rho, mgd.cost_clean, mgd.cost_attacked)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, Outcome (*)()>> all = {
      {"1", c1}, {"2", c2}, {"3", c3}, {"4", c4},  {"5", c5},   {"6", c6},
      {"7", c7}, {"8", c8}, {"9", c9}, {"10a", c10a}, {"10b", c10b}};
  std::vector<std::string> pick(argv + 1, argv + argc);
  bool all_pass = true;
  for (const auto& [id, fn] : all) {
    if (!pick.empty() && std::find(pick.begin(), pick.end(), id) == pick.end()) continue;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all_pass = all_pass && o.pass;
    std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
  }
  return all_pass ? 0 : 1;
}
