#include "cmm/bruteforce.hpp"

#include <gtest/gtest.h>

using namespace cmm;

namespace {

ProblemInstance p1() { return zoo_instance("prop1-quadratic", {{"x_iv", {0, 1}}, {"y_iv", {0, 1}}}); }

ProblemInstance uncoupled_saddle() {
  return zoo_instance("prop1-quadratic", {{"x_iv", {-1, 1}}, {"y_iv", {-1, 1}}, {"coupled", false}});
}

}  // namespace

TEST(Values, Prop1Interval) {
  const GridSpec g;
  const auto inst = p1();
  const double tol = grid_tolerance(inst, g);
  EXPECT_NEAR(value_mMI(inst, g), -1.0, tol);
  EXPECT_NEAR(value_MmI(inst, g), 1.0, tol);
  EXPECT_NEAR(value_mMO(inst, g), 1.0, tol);
  EXPECT_NEAR(value_MmO(inst, g), -1.0, tol);
}

TEST(Values, UncoupledMinimaxEquality) {
  const GridSpec g;
  const auto inst = uncoupled_saddle();
  const double tol = grid_tolerance(inst, g);
  EXPECT_NEAR(value_mMI(inst, g), value_MmI(inst, g), 2 * tol);
  EXPECT_NEAR(value_mMO(inst, g), value_mMI(inst, g), 2 * tol);
}

TEST(Values, Eq23AtKnownSolution) {
  const GridSpec g;
  const auto inst = zoo_instance("eq23-divergence");
  EXPECT_NEAR(value_mMI(inst, g), inst.objective.eval(Vector::Zero(1), Vector::Constant(1, -1.0)),
              grid_tolerance(inst, g));
}

TEST(Values, EmptyInnerSetIsMinusInfinity) {
  // x in (1, 2] leaves no feasible y and max over the empty set is −∞.
  GridSpec g;
  g.points_per_dim = 101;
  const auto inst = zoo_instance("example1-infeasible");
  EXPECT_EQ(value_mMI(inst, g), -std::numeric_limits<double>::infinity());
}

TEST(Values, AllInfeasibleGridThrows) {
  const auto inst = zoo_instance("custom-quadratic", {{"A", {{1.0}}}, {"B", {{1.0}}}, {"c", {-5.0}}});
  EXPECT_THROW(value_mMI(inst, GridSpec{}), InfeasibleError);
}

TEST(Duals, ThreeFormsAgreeExactly) {
  GridSpec g;
  g.points_per_dim = 41;
  for (const auto& inst : {p1(), zoo_instance("eq23-divergence"), zoo_instance("example3-dual")}) {
    const auto dv = value_duals(inst, g, 5.0, 21);
    EXPECT_LE(std::abs(dv.v_D1 - dv.v_D2), 1e-12) << inst.name;
    EXPECT_LE(std::abs(dv.v_D1 - dv.v_D3), 1e-12) << inst.name;
  }
}

TEST(Duals, StrongDualityWithSlater) {
  GridSpec g;
  g.points_per_dim = 201;
  const auto inst = zoo_instance("random-quadratic", {{"n", 1}, {"m", 1}, {"k", 1}, {"seed", 3}});
  const double tol = grid_tolerance(inst, g);
  const auto dv = value_duals(inst, g, 10.0, 201);
  EXPECT_NEAR(value_mMI(inst, g), dv.v_D2, 2 * tol);
}

TEST(Duals, InnerSolutionSetsAtZero) {
  GridSpec g;
  g.points_per_dim = 201;
  const auto sets = inner_solution_sets(zoo_instance("example3-dual"), Vector::Zero(1), g, 2.0, 21);
  ASSERT_EQ(sets.dual.size(), 1u);
  EXPECT_DOUBLE_EQ(sets.dual[0].first[0], 1.0);
  EXPECT_DOUBLE_EQ(sets.dual[0].second[0], 0.0);
  EXPECT_EQ(sets.primal.size(), sets.lambda_grid_size);
  for (const auto& [y, l] : sets.primal) EXPECT_DOUBLE_EQ(y[0], 1.0);
}

TEST(Relations, FullSuite) {
  const auto rep = relations_check(relations_suite(), GridSpec{});
  EXPECT_TRUE(rep.ok()) << rep.table();
  EXPECT_NEAR(rep.values[1].v[static_cast<int>(Problem::mMI)], -3.0, 0.05);
  EXPECT_NEAR(rep.values[1].v[static_cast<int>(Problem::MmO)], -1.0, 0.05);
}

TEST(Relations, UncoupledMaxMinInequality) {
  const auto rep = relations_check({{"saddle", uncoupled_saddle()},
                                    {"gap", relations_suite()[3].second}},
                                   GridSpec{});
  for (const auto& iv : rep.values) {
    EXPECT_LE(iv.v[static_cast<int>(Problem::MmI)], iv.v[static_cast<int>(Problem::mMI)] + 2 * iv.tol);
  }
}

TEST(Relations, SlackInstanceAllEqual) {
  const auto inst = relations_suite()[5].second;
  const auto iv = all_values(inst, GridSpec{});
  for (double v : iv.v) EXPECT_NEAR(v, iv.v[0], 2 * iv.tol);
}
