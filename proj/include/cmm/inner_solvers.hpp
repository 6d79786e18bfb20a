#pragma once

// Solvers for the inner saddle problem min_{x∈X} max_{y∈Y} L(x, y, λ) at a
// fixed multiplier λ. All three methods work on the monotone operator
// F(x, y) = (∇_x L, −∇_y L) over X × Y.

#include "cmm/problem.hpp"

#include <optional>
#include <utility>

namespace cmm {

enum class InnerMethod { gda_multistep, ogda, extragradient };

inline const char* to_string(InnerMethod m) {
  switch (m) {
    case InnerMethod::gda_multistep: return "gda";
    case InnerMethod::ogda: return "ogda";
    case InnerMethod::extragradient: return "extragradient";
  }
  return "?";
}

inline InnerMethod inner_method_from_string(const std::string& s) {
  if (s == "gda" || s == "gda_multistep") return InnerMethod::gda_multistep;
  if (s == "ogda") return InnerMethod::ogda;
  if (s == "extragradient" || s == "eg") return InnerMethod::extragradient;
  throw ConfigError("unknown inner method '" + s + "' (gda|ogda|extragradient)");
}

struct InnerSolverConfig {
  InnerMethod method = InnerMethod::gda_multistep;
  double step_x = 0.0;  // 0 selects the method default
  double step_y = 0.0;
  int ascent_steps = 1;  // y steps per x step (gda only)
  int max_iters = 20000;
  // Stop once residual() <= target; 0 runs exactly max_iters iterations.
  double target_residual = 1e-8;

  void validate() const {
    if (step_x < 0.0 || step_y < 0.0) throw ConfigError("inner steps must be positive");
    if (ascent_steps < 1) throw ConfigError("ascent_steps must be >= 1");
    if (max_iters < 0) throw ConfigError("inner max_iters must be >= 0");
    if (target_residual < 0.0) throw ConfigError("target_residual must be >= 0");
  }
};

struct InnerSolution {
  Vector x;
  Vector y;
  double residual = 0.0;
  int iters = 0;
  // Upper bound on ‖x − x̄(λ)‖² + ‖y − ȳ(λ)‖²; +inf without strong convexity.
  double certified_d_bound = std::numeric_limits<double>::infinity();
  bool heuristic = true;
};

// 1/(2L) for gda and extragradient, 1/(4L) for ogda, L = max(L_x, L_y).
inline std::pair<double, double> default_inner_steps(const ProblemInstance& inst,
                                                     InnerMethod method) {
  const double L = std::max(inst.constants.L(), 1e-12);
  const double s = method == InnerMethod::ogda ? 1.0 / (4.0 * L) : 1.0 / (2.0 * L);
  return {s, s};
}

inline std::pair<double, double> resolved_steps(const ProblemInstance& inst,
                                                const InnerSolverConfig& cfg) {
  auto [sx, sy] = default_inner_steps(inst, cfg.method);
  return {cfg.step_x > 0.0 ? cfg.step_x : sx, cfg.step_y > 0.0 ? cfg.step_y : sy};
}

// Projected-gradient residual of L over X × Y, scaled by 1/min(step).
inline double residual(const ProblemInstance& inst, const Vector& lambda,
                       const Vector& x, const Vector& y, double step_x,
                       double step_y) {
  const auto g = lagrangian_grads(inst, x, y, lambda);
  const Vector rx = x - project(inst.set_x, x - step_x * g.gx);
  const Vector ry = y - project(inst.set_y, y + step_y * g.gy);
  return std::sqrt(rx.squaredNorm() + ry.squaredNorm()) / std::min(step_x, step_y);
}

// Lipschitz constant of F over (x, y).
inline double operator_lipschitz(const ProblemConstants& c) {
  return std::hypot(c.L_x, c.L_y);
}

// Error bound for a strongly monotone variational inequality: with the
// natural residual r at common step η, ‖z − z*‖ <= (1 + η L_F) r / μ.
inline double certified_distance_sq(const ProblemConstants& c, double eta,
                                    double res) {
  if (!c.strongly_convex_concave()) return std::numeric_limits<double>::infinity();
  const double dist = (1.0 + eta * operator_lipschitz(c)) * res / c.mu();
  return dist * dist;
}

// Residual target (at common step η) that certifies distance² <= d_max.
inline double residual_target_for(const ProblemConstants& c, double eta,
                                  double d_max) {
  return std::sqrt(d_max) * c.mu() / (1.0 + eta * operator_lipschitz(c));
}

namespace detail {

inline void guard_finite(const Vector& x, const Vector& y, int it,
                         const char* who) {
  if (!all_finite(x) || !all_finite(y)) {
    throw DivergenceError(std::string(who) + ": non-finite iterate", it);
  }
}

}  // namespace detail

inline InnerSolution inner_solve(const ProblemInstance& inst, const Vector& lambda,
                                 const InnerSolverConfig& cfg,
                                 const std::optional<std::pair<Vector, Vector>>& warm = {}) {
  cfg.validate();
  require_dim(lambda.size(), inst.k(), "lambda");
  require_nonnegative(lambda, "lambda");
  const auto [sx, sy] = resolved_steps(inst, cfg);
  const double eta = std::min(sx, sy);
  const auto& cp = inst.coupling;
  const Vector Atl = cp.A.transpose() * lambda;
  const Vector Btl = cp.B.transpose() * lambda;
  const auto& f = inst.objective;
  auto gx = [&](const Vector& x, const Vector& y) { return Vector(f.grad_x(x, y) - Atl); };
  auto gy = [&](const Vector& x, const Vector& y) { return Vector(f.grad_y(x, y) - Btl); };

  Vector x, y;
  if (warm) {
    x = project(inst.set_x, warm->first);
    y = project(inst.set_y, warm->second);
  } else {
    x = project(inst.set_x, Vector::Zero(inst.n()));
    y = project(inst.set_y, Vector::Zero(inst.m()));
  }
  auto res_of = [&](const Vector& xx, const Vector& yy) {
    return residual(inst, lambda, xx, yy, eta, eta);
  };
  const bool check = cfg.target_residual > 0.0;

  InnerSolution out;
  int it = 0;
  double res = check ? res_of(x, y) : 0.0;
  if (!(check && res <= cfg.target_residual)) {
    Vector gx_prev, gy_prev;
    if (cfg.method == InnerMethod::ogda) {
      gx_prev = gx(x, y);
      gy_prev = gy(x, y);
    }
    for (it = 1; it <= cfg.max_iters; ++it) {
      switch (cfg.method) {
        case InnerMethod::gda_multistep: {
          for (int s = 0; s < cfg.ascent_steps; ++s) {
            y = project(inst.set_y, y + sy * gy(x, y));
          }
          x = project(inst.set_x, x - sx * gx(x, y));
          break;
        }
        case InnerMethod::ogda: {
          const Vector gxc = gx(x, y);
          const Vector gyc = gy(x, y);
          x = project(inst.set_x, x - sx * (2.0 * gxc - gx_prev));
          y = project(inst.set_y, y + sy * (2.0 * gyc - gy_prev));
          gx_prev = gxc;
          gy_prev = gyc;
          break;
        }
        case InnerMethod::extragradient: {
          const Vector xh = project(inst.set_x, x - sx * gx(x, y));
          const Vector yh = project(inst.set_y, y + sy * gy(x, y));
          const Vector gxh = gx(xh, yh);
          const Vector gyh = gy(xh, yh);
          x = project(inst.set_x, x - sx * gxh);
          y = project(inst.set_y, y + sy * gyh);
          break;
        }
      }
      detail::guard_finite(x, y, it, "inner_solve");
      if (check) {
        res = res_of(x, y);
        if (res <= cfg.target_residual) break;
      }
    }
    it = std::min(it, cfg.max_iters);
  }
  if (!check) res = res_of(x, y);
  out.x = std::move(x);
  out.y = std::move(y);
  out.residual = res;
  out.iters = it;
  out.heuristic = !inst.constants.strongly_convex_concave();
  out.certified_d_bound = certified_distance_sq(inst.constants, eta, res);
  return out;
}

// High-accuracy configuration used for reference quantities (G, ∇G, Q).
inline InnerSolverConfig reference_inner_config(const ProblemInstance& inst,
                                                double d_max = 1e-18) {
  InnerSolverConfig cfg;
  cfg.method = InnerMethod::extragradient;
  const auto [s, unused] = default_inner_steps(inst, cfg.method);
  (void)unused;
  cfg.step_x = cfg.step_y = s;
  cfg.max_iters = 200000;
  cfg.target_residual = inst.constants.strongly_convex_concave()
                            ? residual_target_for(inst.constants, s, d_max)
                            : 1e-9;
  return cfg;
}

// ---------------------------------------------------------------------------
// Plain GDA / OGDA on the coupled primal: y is projected onto
// {y ∈ Y : By <= c − Ax} at the current x. Needs Y to be a box or polytope.

enum class PrimalMethod { gda, ogda };

struct PrimalResult {
  Vector x;
  Vector y;
  std::vector<std::pair<Vector, Vector>> path;
};

inline ConvexSet coupled_inner_set(const ProblemInstance& inst, const Vector& x) {
  std::vector<PolytopeComponent> comps;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          comps.emplace_back(s);
        } else if constexpr (std::is_same_v<T, Polytope>) {
          comps.insert(comps.end(), s.components.begin(), s.components.end());
        } else {
          throw NotApplicableError("primal GDA needs a box or polytope Y");
        }
      },
      inst.set_y.variant());
  const auto& cp = inst.coupling;
  const Vector rhs = cp.c - cp.A * x;
  for (Eigen::Index i = 0; i < inst.k(); ++i) {
    comps.emplace_back(Halfspace{cp.B.row(i).transpose(), rhs[i]});
  }
  return ConvexSet::polytope(inst.m(), std::move(comps));
}

inline PrimalResult primal_gda_run(const ProblemInstance& inst, PrimalMethod method,
                                   double step, int T, Vector x, Vector y) {
  if (step <= 0.0 || T < 0) throw ConfigError("primal GDA needs step > 0, T >= 0");
  const auto& f = inst.objective;
  PrimalResult out;
  x = project(inst.set_x, x);
  y = project(coupled_inner_set(inst, x), y);
  out.path.emplace_back(x, y);
  Vector gx_prev = f.grad_x(x, y);
  Vector gy_prev = f.grad_y(x, y);
  for (int t = 1; t <= T; ++t) {
    const Vector gxc = f.grad_x(x, y);
    const Vector gyc = f.grad_y(x, y);
    Vector dx = gxc, dy = gyc;
    if (method == PrimalMethod::ogda) {
      dx = 2.0 * gxc - gx_prev;
      dy = 2.0 * gyc - gy_prev;
    }
    x = project(inst.set_x, x - step * dx);
    y = project(coupled_inner_set(inst, x), y + step * dy);
    gx_prev = gxc;
    gy_prev = gyc;
    detail::guard_finite(x, y, t, "primal_gda_run");
    out.path.emplace_back(x, y);
  }
  out.x = x;
  out.y = y;
  return out;
}

}  // namespace cmm
