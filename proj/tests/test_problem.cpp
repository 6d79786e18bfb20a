#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace cmm;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

std::vector<ProblemInstance> zoo_all() {
  std::vector<ProblemInstance> out;
  for (const auto& [name, desc] : zoo_catalog()) out.push_back(zoo_instance(name));
  out.push_back(zoo_instance("jamming", {{"eta", 0.1}}));
  out.push_back(zoo_instance("random-quadratic", {{"n", 3}, {"m", 2}, {"k", 2}, {"seed", 9}}));
  return out;
}

}  // namespace

TEST(Lagrangian, Eq23AtSolution) {
  const auto inst = zoo_instance("eq23-divergence");
  EXPECT_DOUBLE_EQ(lagrangian_eval(inst, vec({0.0}), vec({-1.0}), vec({0.0, 0.0})), -0.5);
  EXPECT_DOUBLE_EQ(lagrangian_eval(inst, vec({0.0}), vec({-1.0}), vec({2.0, 0.0})), -0.5);
}

TEST(Lagrangian, RandomQuadraticMatchesDirectFormula) {
  const auto inst = zoo_instance("random-quadratic", {{"n", 3}, {"m", 2}, {"k", 2}, {"seed", 5}});
  const auto& qf = *inst.quadratic;
  const auto& cp = inst.coupling;
  Rng rng(8);
  for (int s = 0; s < 50; ++s) {
    const Vector x = rng.uniform_vector(3, -1, 1), y = rng.uniform_vector(2, -1, 1);
    const Vector lam = rng.uniform_vector(2, 0, 3);
    const double f = 0.5 * x.dot(qf.P * x) + x.dot(qf.R * y) - 0.5 * y.dot(qf.S * y) +
                     qf.p.dot(x) + qf.q.dot(y) + qf.r0;
    const double want = f - lam.dot(cp.A * x + cp.B * y - cp.c);
    EXPECT_NEAR(lagrangian_eval(inst, x, y, lam), want, 1e-12 * (1 + std::abs(want)));
  }
}

TEST(Lagrangian, ErrorsOnBadInput) {
  const auto inst = zoo_instance("eq23-divergence");
  EXPECT_THROW(lagrangian_eval(inst, vec({0.0, 1.0}), vec({-1.0}), vec({0.0, 0.0})), DimensionError);
  EXPECT_THROW(lagrangian_eval(inst, vec({0.0}), vec({-1.0}), vec({-1.0, 0.0})), DomainError);
}

TEST(LagrangianGrads, ZeroMultiplierGivesObjectiveGradient) {
  const auto inst = zoo_instance("random-quadratic", {{"seed", 4}});
  const Vector x = vec({0.3, -0.2}), y = vec({0.1, 0.4});
  const auto g = lagrangian_grads(inst, x, y, Vector::Zero(2));
  EXPECT_TRUE(g.gx.isApprox(inst.objective.grad_x(x, y)));
  EXPECT_TRUE(g.gy.isApprox(inst.objective.grad_y(x, y)));
  EXPECT_TRUE(g.glambda.isApprox(-inst.coupling.residual(x, y)));
}

TEST(LagrangianGrads, FiniteDifferencesOnZoo) {
  for (const auto& inst : zoo_all()) {
    Rng rng(21);
    for (int s = 0; s < 20; ++s) {
      const Vector x = sample_in(inst.set_x, rng.uniform_vector(inst.n(), 0, 1));
      const Vector y = sample_in(inst.set_y, rng.uniform_vector(inst.m(), 0, 1));
      const Vector lam = rng.uniform_vector(inst.k(), 0, 2);
      const auto g = lagrangian_grads(inst, x, y, lam);
      const Vector gx = oracle::central_difference(
          [&](const Vector& v) { return lagrangian_eval(inst, v, y, lam); }, x);
      const Vector gy = oracle::central_difference(
          [&](const Vector& v) { return lagrangian_eval(inst, x, v, lam); }, y);
      EXPECT_LE((g.gx - gx).norm(), 1e-5 * std::max(1.0, g.gx.norm())) << inst.name;
      EXPECT_LE((g.gy - gy).norm(), 1e-5 * std::max(1.0, g.gy.norm())) << inst.name;
    }
  }
}

TEST(Zoo, Eq23Shape) {
  const auto inst = zoo_instance("eq23-divergence");
  EXPECT_EQ(inst.n(), 1);
  EXPECT_EQ(inst.m(), 1);
  EXPECT_EQ(inst.k(), 2);
  EXPECT_TRUE(inst.coupling.residual(vec({0.0}), vec({-1.0})).isZero());
  EXPECT_TRUE(inst.constants.strongly_convex_concave());
}

TEST(Zoo, Prop1QuadraticObjective) {
  const auto inst = zoo_instance("prop1-quadratic", {{"x_iv", {0, 1}}, {"y_iv", {0, 1}}, {"sign", "+"}});
  EXPECT_DOUBLE_EQ(inst.objective.eval(vec({0.5}), vec({0.25})), 0.25 - 0.0625);
  EXPECT_TRUE(inst.coupling.residual(vec({0.4}), vec({0.6})).isZero(1e-15));
}

TEST(Zoo, JammingConcavityNeedsRegularizer) {
  EXPECT_FALSE(zoo_instance("jamming", {{"n", 3}}).constants.strongly_convex_concave());
  EXPECT_TRUE(zoo_instance("jamming", {{"n", 3}, {"eta", 0.5}}).constants.mu_y > 0.0);
}

TEST(Zoo, UnknownNameAndBadParams) {
  EXPECT_THROW(zoo_instance("nope"), ConfigError);
  EXPECT_THROW(zoo_instance("random-quadratic", {{"mu", -1.0}}), ConfigError);
}

TEST(Feasibility, Eq23AlwaysFeasible) {
  const auto rep = feasibility_check(zoo_instance("eq23-divergence"), 32, 1);
  EXPECT_TRUE(rep.feasible());
  EXPECT_EQ(rep.infeasible, 0);
}

TEST(Feasibility, InnerSetEmptiesBeyondOne) {
  const auto inst = zoo_instance("example1-infeasible");
  EXPECT_GT(inner_feasibility(inst, vec({1.5})).residual, 0.4);
  EXPECT_LE(inner_feasibility(inst, vec({0.5})).residual, 1e-12);
  EXPECT_FALSE(feasibility_check(inst, 32, 1).feasible());
}

TEST(Feasibility, SlackConstraintsHavePositiveMargin) {
  const auto inst = zoo_instance("random-quadratic", {{"margin_lo", 5.0}, {"margin_hi", 6.0}});
  const auto rep = feasibility_check(inst, 32, 2);
  EXPECT_TRUE(rep.feasible());
  EXPECT_GT(rep.slater_margin, 0.0);
}

TEST(Serialize, RoundTripPreservesEvaluation) {
  for (const auto& inst : zoo_all()) {
    const auto back = instance_from_json(Json::parse(instance_to_json(inst).dump()));
    EXPECT_EQ(back.name, inst.name);
    EXPECT_EQ(back.k(), inst.k());
    Rng rng(6);
    for (int s = 0; s < 10; ++s) {
      const Vector x = sample_in(inst.set_x, rng.uniform_vector(inst.n(), 0, 1));
      const Vector y = sample_in(inst.set_y, rng.uniform_vector(inst.m(), 0, 1));
      const Vector lam = rng.uniform_vector(inst.k(), 0, 1);
      EXPECT_DOUBLE_EQ(lagrangian_eval(back, x, y, lam), lagrangian_eval(inst, x, y, lam)) << inst.name;
    }
    EXPECT_EQ(instance_to_json(back).dump(), instance_to_json(inst).dump()) << inst.name;
  }
}

TEST(Serialize, NonFiniteNumbersSurvive) {
  const double inf = std::numeric_limits<double>::infinity();
  const Vector v = vec({inf, -inf, std::nan(""), 1.5});
  const Vector back = vector_from_json(Json::parse(vector_to_json(v).dump()));
  EXPECT_EQ(back[0], inf);
  EXPECT_EQ(back[1], -inf);
  EXPECT_TRUE(std::isnan(back[2]));
  EXPECT_EQ(back[3], 1.5);
}

TEST(InnerSolve, Eq23ZeroMultiplierMatchesClosedForm) {
  const auto inst = zoo_instance("eq23-divergence");
  const auto [xs, ys] = oracle::quadratic_saddle(*inst.quadratic, Vector::Zero(1), Vector::Zero(1));
  for (auto method : {InnerMethod::gda_multistep, InnerMethod::ogda, InnerMethod::extragradient}) {
    InnerSolverConfig cfg;
    cfg.method = method;
    const auto sol = inner_solve(inst, Vector::Zero(2), cfg);
    EXPECT_LE(sol.residual, cfg.target_residual) << to_string(method);
    EXPECT_LE((sol.x - xs).norm() + (sol.y - ys).norm(), 1e-7) << to_string(method);
  }
}

TEST(InnerSolve, RandomQuadraticMatchesClosedFormWhenInterior) {
  // Large boxes keep the saddle interior, where it solves a linear system.
  auto inst = zoo_instance("random-quadratic", {{"n", 3}, {"m", 2}, {"k", 2}, {"seed", 17}});
  inst.set_x = ConvexSet::box(3, -100.0, 100.0);
  inst.set_y = ConvexSet::box(2, -100.0, 100.0);
  finalize_constants(inst);
  const Vector lam = vec({0.4, 0.7});
  const auto& cp = inst.coupling;
  const auto [xs, ys] = oracle::quadratic_saddle(*inst.quadratic, -cp.A.transpose() * lam,
                                                 -cp.B.transpose() * lam);
  const auto sol = inner_solve(inst, lam, reference_inner_config(inst));
  EXPECT_LE((sol.x - xs).norm() + (sol.y - ys).norm(), 1e-7);
  EXPECT_LE((sol.x - xs).squaredNorm() + (sol.y - ys).squaredNorm(), sol.certified_d_bound + 1e-14);
}

TEST(InnerSolve, WarmStartAtSolutionStopsImmediately) {
  const auto inst = zoo_instance("eq23-divergence");
  InnerSolverConfig cfg;
  const auto sol = inner_solve(inst, Vector::Zero(2), cfg);
  const auto again = inner_solve(inst, Vector::Zero(2), cfg, std::make_pair(sol.x, sol.y));
  EXPECT_EQ(again.iters, 0);
  EXPECT_LE(again.residual, cfg.target_residual);
}

TEST(Residual, InteriorPointIsGradientNorm) {
  auto inst = zoo_instance("random-quadratic", {{"seed", 3}});
  inst.set_x = ConvexSet::box(2, -100.0, 100.0);
  inst.set_y = ConvexSet::box(2, -100.0, 100.0);
  const Vector x = vec({0.1, 0.2}), y = vec({-0.3, 0.2}), lam = vec({0.5, 0.1});
  const auto g = lagrangian_grads(inst, x, y, lam);
  const double want = std::sqrt(g.gx.squaredNorm() + g.gy.squaredNorm());
  EXPECT_NEAR(residual(inst, lam, x, y, 0.01, 0.01), want, 1e-10 * want);
}

TEST(Residual, Eq23MatchesDirectFormula) {
  const auto inst = zoo_instance("eq23-divergence");
  Rng rng(2);
  for (int s = 0; s < 20; ++s) {
    const double x = rng.uniform(-1, 1), y = rng.uniform(-2, 0);
    const double l1 = rng.uniform(0, 2), l2 = rng.uniform(0, 2);
    const double gx = x + y - (l1 - l2), gy = x - y + (l1 - l2);
    const double rx = x - std::clamp(x - 0.1 * gx, -1.0, 1.0);
    const double ry = y - std::clamp(y + 0.1 * gy, -2.0, 0.0);
    EXPECT_NEAR(residual(inst, vec({l1, l2}), vec({x}), vec({y}), 0.1, 0.1),
                std::hypot(rx, ry) / 0.1, 1e-12);
  }
}
