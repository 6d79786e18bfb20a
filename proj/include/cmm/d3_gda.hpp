#pragma once

// Projected gradient descent-ascent on the D3 dual
//   max_{y∈Y} min_{x∈X, λ>=0} L(x, y, λ)
// for objectives that are strongly concave in y but only convex in x.

#include "cmm/inner_solvers.hpp"
#include "cmm/trace.hpp"

namespace cmm {

struct D3Config {
  double alpha = 0.0;  // x and λ step; 0 selects min(1/(2L_x), 1/(2σ_max))
  double beta = 0.0;   // y step; 0 selects 1/(2L_y)
  int T = 1000;
  std::optional<Vector> x0;
  std::optional<Vector> y0;
  Vector lambda0;  // empty selects 0
};

struct PResiduals {
  double p_xl = 0.0;
  double p_y = 0.0;
};

// P_{x,λ} = [(x − proj_X(x − α∇_x L))/α ; (λ − proj₊(λ − α∇_λ L))/α]
// P_y     = (y − proj_Y(y + β∇_y L))/β
inline PResiduals p_residuals(const ProblemInstance& inst, const Vector& x,
                              const Vector& y, const Vector& lambda, double alpha,
                              double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw ConfigError("p_residuals needs positive steps");
  const auto g = lagrangian_grads(inst, x, y, lambda);
  const Vector px = (x - project(inst.set_x, x - alpha * g.gx)) / alpha;
  const Vector pl = (lambda - positive_part(lambda - alpha * g.glambda)) / alpha;
  const Vector py = (y - project(inst.set_y, y + beta * g.gy)) / beta;
  return {std::sqrt(px.squaredNorm() + pl.squaredNorm()), py.norm()};
}

inline std::pair<double, double> d3_default_steps(const ProblemInstance& inst) {
  const auto& c = inst.constants;
  const double sigma = inst.coupling.sigma_max();
  double alpha = 1.0 / (2.0 * std::max(c.L_x, 1e-12));
  if (sigma > 0.0) alpha = std::min(alpha, 1.0 / (2.0 * sigma));
  return {alpha, 1.0 / (2.0 * std::max(c.L_y, 1e-12))};
}

inline SolverTrace d3_gda_run(const ProblemInstance& inst, const D3Config& cfg) {
  inst.validate();
  if (cfg.T < 1) throw ConfigError("d3-gda needs T >= 1");
  if (cfg.alpha < 0.0 || cfg.beta < 0.0) throw ConfigError("d3-gda steps must be positive");
  const auto [a0, b0] = d3_default_steps(inst);
  const double alpha = cfg.alpha > 0.0 ? cfg.alpha : a0;
  const double beta = cfg.beta > 0.0 ? cfg.beta : b0;
  const auto& cp = inst.coupling;
  const auto& f = inst.objective;

  SolverTrace trace;
  trace.solver = "d3-gda";
  auto& meta = trace.metadata;
  meta["instance"] = inst.name;
  meta["alpha"] = alpha;
  meta["beta"] = beta;
  if (!(inst.constants.mu_y > 0.0)) {
    meta["guarantees"] = "none: objective not strongly concave in y";
  }

  Vector lambda = cfg.lambda0.size() ? cfg.lambda0 : Vector::Zero(inst.k());
  require_dim(lambda.size(), inst.k(), "lambda0");
  require_nonnegative(lambda, "lambda0");
  Vector x = project(inst.set_x, cfg.x0 ? *cfg.x0 : Vector::Zero(inst.n()));
  Vector y = project(inst.set_y, cfg.y0 ? *cfg.y0 : Vector::Zero(inst.m()));

  for (int r = 0; r < cfg.T; ++r) {
    const Vector y_next =
        project(inst.set_y, y + beta * (f.grad_y(x, y) - cp.B.transpose() * lambda));
    const Vector x_next =
        project(inst.set_x, x - alpha * (f.grad_x(x, y_next) - cp.A.transpose() * lambda));
    // The multiplier step uses x^r, not x^{r+1}.
    const Vector lambda_next =
        positive_part(lambda - alpha * (-(cp.A * x) - cp.B * y_next + cp.c));
    x = x_next;
    y = y_next;
    lambda = lambda_next;
    detail::guard_finite(x, y, r, "d3_gda_run");
    if (!all_finite(lambda)) throw DivergenceError("d3_gda_run: non-finite multiplier", r);

    TraceRow row;
    row.r = r;
    row.x = x;
    row.y = y;
    row.lambda = lambda;
    const auto p = p_residuals(inst, x, y, lambda, alpha, beta);
    row.p_xl = p.p_xl;
    row.p_y = p.p_y;
    fill_constraint_stats(inst, row);
    trace.rows.push_back(std::move(row));
  }
  meta["lambda_final"] = vector_to_json(lambda);
  meta["lambda_sup"] = trace.lambda_sup();
  return trace;
}

}  // namespace cmm
