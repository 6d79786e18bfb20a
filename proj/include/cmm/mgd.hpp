#pragma once

// Multiplier gradient descent: projected gradient descent on the dual
// function G(λ) = min_x max_y L(x, y, λ), with ∇G obtained from an inexact
// inner saddle solve.

#include "cmm/inner_solvers.hpp"
#include "cmm/trace.hpp"

namespace cmm {

struct DualConstants {
  double L_H = 0.0;
  double L_G = 0.0;
  double sigma_max = 0.0;
  double D1 = 0.0;
};

inline DualConstants dual_constants_from(const ProblemConstants& pc, double sigma,
                                         double c_norm) {
  if (!(pc.mu_x > 0.0) || !(pc.mu_y > 0.0)) {
    throw NotApplicableError(
        "dual constants need mu_x > 0 and mu_y > 0; use d3-gda when mu_x = 0");
  }
  DualConstants dc;
  dc.sigma_max = sigma;
  const double lx = pc.L_x, ly = pc.L_y, mx = pc.mu_x, my = pc.mu_y;
  dc.L_H = (lx + sigma) * (ly + my) / my + sigma * (lx + sigma + my) / my;
  dc.L_G = sigma * (1.0 + ly / my) * dc.L_H / mx + sigma * sigma / my;
  dc.D1 = 2.0 * sigma * pc.D + c_norm;
  return dc;
}

inline DualConstants dual_constants(const ProblemInstance& inst) {
  return dual_constants_from(inst.constants, inst.coupling.sigma_max(),
                             inst.coupling.c.norm());
}

inline Json dual_constants_to_json(const DualConstants& dc) {
  return {{"L_H", dc.L_H}, {"L_G", dc.L_G}, {"sigma_max", dc.sigma_max}, {"D1", dc.D1}};
}

struct GradG {
  Vector g;
  double value = 0.0;  // G(λ) at the approximate saddle
  InnerSolution solution;
};

inline GradG grad_G(const ProblemInstance& inst, const Vector& lambda,
                    const InnerSolverConfig& inner_cfg,
                    const std::optional<std::pair<Vector, Vector>>& warm = {}) {
  GradG out;
  out.solution = inner_solve(inst, lambda, inner_cfg, warm);
  const auto& s = out.solution;
  out.g = -inst.coupling.residual(s.x, s.y);
  out.value = lagrangian_eval(inst, s.x, s.y, lambda);
  return out;
}

// Q(λ) = (λ − proj₊(λ − α∇G(λ))) / α
inline Vector q_map(const Vector& lambda, const Vector& gradG, double alpha) {
  return (lambda - positive_part(lambda - alpha * gradG)) / alpha;
}

enum class DeltaMode { fixed, inverse_square, fixed_iters };

inline const char* to_string(DeltaMode m) {
  switch (m) {
    case DeltaMode::fixed: return "fixed";
    case DeltaMode::inverse_square: return "inverse_square";
    case DeltaMode::fixed_iters: return "fixed_iters";
  }
  return "?";
}

inline DeltaMode delta_mode_from_string(const std::string& s) {
  if (s == "fixed") return DeltaMode::fixed;
  if (s == "inverse_square" || s == "schedule") return DeltaMode::inverse_square;
  if (s == "fixed_iters") return DeltaMode::fixed_iters;
  throw ConfigError("unknown delta mode '" + s + "' (fixed|inverse_square|fixed_iters)");
}

struct MgdConfig {
  double alpha = 0.0;  // 0 selects 0.9 / L_G
  int T = 100;
  DeltaMode delta_mode = DeltaMode::fixed;
  double delta = 1e-3;      // fixed mode
  int inner_iters = 5;      // fixed_iters mode (K)
  double epsilon = 1e-3;    // target for the final stationarity flag
  InnerSolverConfig inner{};
  Vector lambda0;  // empty selects 0
  std::optional<Vector> x0;
  std::optional<Vector> y0;
  bool reference = true;  // compute Q and G with a reference inner solve
  bool allow_large_alpha = false;
};

// δ^r for the inverse-square schedule; r = 0 uses δ = 1.
inline double schedule_delta(int r) {
  const double rr = std::max(r, 1);
  return 1.0 / (rr * rr);
}

inline SolverTrace mgd_run(const ProblemInstance& inst, const MgdConfig& cfg) {
  inst.validate();
  cfg.inner.validate();
  if (cfg.T < 1) throw ConfigError("mgd needs T >= 1");
  if (cfg.delta_mode == DeltaMode::fixed && !(cfg.delta > 0.0)) {
    throw ConfigError("fixed delta mode needs delta > 0");
  }
  if (cfg.delta_mode == DeltaMode::fixed_iters && cfg.inner_iters < 1) {
    throw ConfigError("fixed_iters mode needs inner_iters >= 1");
  }
  const auto& pc = inst.constants;
  const auto& cp = inst.coupling;
  SolverTrace trace;
  trace.solver = "mgd";
  auto& meta = trace.metadata;
  meta["instance"] = inst.name;
  meta["delta_mode"] = to_string(cfg.delta_mode);
  meta["inner_method"] = to_string(cfg.inner.method);

  std::optional<DualConstants> dc;
  if (pc.strongly_convex_concave()) {
    dc = dual_constants(inst);
    meta["dual_constants"] = dual_constants_to_json(*dc);
  } else {
    meta["guarantees"] = "none: objective not strongly convex-concave";
  }
  double alpha = cfg.alpha;
  if (alpha <= 0.0) {
    if (!dc || !(dc->L_G > 0.0)) {
      throw ConfigError("alpha must be given when L_G is unavailable or zero");
    }
    alpha = 0.9 / dc->L_G;
  }
  const bool large = dc && dc->L_G > 0.0 && alpha > 1.0 / dc->L_G;
  if (large && !cfg.allow_large_alpha) {
    throw ConfigError("alpha = " + std::to_string(alpha) + " exceeds 1/L_G = " +
                      std::to_string(1.0 / dc->L_G) +
                      " (set allow_large_alpha to override)");
  }
  meta["alpha"] = alpha;
  meta["alpha_exceeds_1_over_LG"] = large;
  meta["f_lower"] = detail::number_to_json(pc.f_lower);
  meta["estimated_constants"] = pc.estimated;
  if (cfg.delta_mode == DeltaMode::fixed) meta["delta"] = cfg.delta;
  if (cfg.delta_mode == DeltaMode::fixed_iters) meta["inner_iters"] = cfg.inner_iters;

  Vector lambda = cfg.lambda0.size() ? cfg.lambda0 : Vector::Zero(inst.k());
  require_dim(lambda.size(), inst.k(), "lambda0");
  require_nonnegative(lambda, "lambda0");
  Vector x = project(inst.set_x, cfg.x0 ? *cfg.x0 : Vector::Zero(inst.n()));
  Vector y = project(inst.set_y, cfg.y0 ? *cfg.y0 : Vector::Zero(inst.m()));

  const auto [sx, sy] = resolved_steps(inst, cfg.inner);
  const double eta = std::min(sx, sy);
  const InnerSolverConfig ref_cfg = reference_inner_config(inst);
  std::optional<std::pair<Vector, Vector>> ref_warm;

  for (int r = 0; r < cfg.T; ++r) {
    InnerSolverConfig icfg = cfg.inner;
    double delta_r = std::numeric_limits<double>::quiet_NaN();
    switch (cfg.delta_mode) {
      case DeltaMode::fixed:
        delta_r = cfg.delta;
        icfg.target_residual = residual_target_for(pc, eta, delta_r * delta_r / 4.0);
        break;
      case DeltaMode::inverse_square:
        delta_r = schedule_delta(r);
        icfg.target_residual = residual_target_for(pc, eta, delta_r * delta_r / 4.0);
        break;
      case DeltaMode::fixed_iters:
        icfg.target_residual = 0.0;
        icfg.max_iters = cfg.inner_iters;
        break;
    }
    if (cfg.delta_mode != DeltaMode::fixed_iters && !(icfg.target_residual > 0.0)) {
      // No certificate is possible; fall back to the configured budget.
      icfg.target_residual = 0.0;
    }
    const InnerSolution sol =
        inner_solve(inst, lambda, icfg, std::make_pair(x, y));

    TraceRow row;
    row.r = r;
    row.x = sol.x;
    row.y = sol.y;
    row.lambda = lambda;
    row.d_bound = sol.certified_d_bound;
    row.inner_iters = sol.iters;
    fill_constraint_stats(inst, row);
    if (cfg.reference) {
      const GradG ref = grad_G(inst, lambda, ref_cfg, ref_warm);
      ref_warm = std::make_pair(ref.solution.x, ref.solution.y);
      row.G_estimate = ref.value;
      row.q_norm = q_map(lambda, ref.g, alpha).norm();
    }
    trace.rows.push_back(std::move(row));

    x = sol.x;
    y = sol.y;
    lambda = positive_part(lambda - alpha * (-cp.residual(x, y)));
    if (!all_finite(lambda)) throw DivergenceError("mgd: non-finite multiplier", r);
  }

  const auto& last = trace.last();
  const double delta_last = cfg.delta_mode == DeltaMode::fixed ? cfg.delta
                            : cfg.delta_mode == DeltaMode::inverse_square
                                ? schedule_delta(last.r)
                                : std::numeric_limits<double>::quiet_NaN();
  meta["epsilon"] = cfg.epsilon;
  meta["delta_final"] = detail::number_to_json(delta_last);
  meta["certified"] = cfg.reference && dc && last.q_norm <= cfg.epsilon &&
                      last.d_bound <= delta_last * delta_last;
  meta["lambda_final"] = vector_to_json(lambda);
  meta["lambda_sup"] = trace.lambda_sup();
  return trace;
}

// ---------------------------------------------------------------------------
// Rate bounds.

struct RateReport {
  std::string mode;
  std::vector<int> T;
  std::vector<double> measured;  // running average of ‖Q‖²
  std::vector<double> bound;
  double floor = 0.0;
  bool vacuous = false;  // α >= 1/L_G makes the bound meaningless

  bool all_within() const {
    for (std::size_t i = 0; i < T.size(); ++i) {
      if (!(measured[i] <= bound[i])) return false;
    }
    return true;
  }
  double max_ratio() const {
    double m = 0.0;
    for (std::size_t i = 0; i < T.size(); ++i) m = std::max(m, measured[i] / bound[i]);
    return m;
  }
  std::optional<double> bound_at(int t) const {
    for (std::size_t i = 0; i < T.size(); ++i) {
      if (T[i] == t) return bound[i];
    }
    return std::nullopt;
  }
  std::optional<double> measured_at(int t) const {
    for (std::size_t i = 0; i < T.size(); ++i) {
      if (T[i] == t) return measured[i];
    }
    return std::nullopt;
  }
};

// Fixed δ: (1/T)Σ_{r<T}‖Q(λ^r)‖² against the fixed-accuracy bound.
// Schedule δ^r = 1/r²: (1/T)Σ_{t=1..T}‖Q(λ^{r0+t})‖² with r0 = 1.
inline RateReport rate_report(const SolverTrace& trace, const DualConstants& dc) {
  const auto& meta = trace.metadata;
  if (trace.solver != "mgd" || !meta.contains("alpha") || !meta.contains("f_lower")) {
    throw ConfigError("rate_report needs an mgd trace with alpha and f_lower");
  }
  for (const auto& row : trace.rows) {
    if (std::isnan(row.q_norm) || std::isnan(row.G_estimate)) {
      throw ConfigError("rate_report needs reference Q and G values in the trace");
    }
  }
  const double alpha = meta.at("alpha").get<double>();
  const double f_lower = detail::number_from_json(meta.at("f_lower"));
  const std::string mode = meta.at("delta_mode").get<std::string>();
  const double den = alpha - dc.L_G * alpha * alpha;
  const double s = dc.sigma_max;
  RateReport rep;
  rep.mode = mode;
  rep.vacuous = !(den > 0.0);
  const auto& rows = trace.rows;
  auto q2 = [&](std::size_t r) { return rows[r].q_norm * rows[r].q_norm; };

  if (mode == "fixed") {
    const double delta = meta.at("delta").get<double>();
    rep.floor = (alpha * s * dc.D1 * delta + alpha * alpha * dc.L_G * s * s * delta * delta) / den;
    const double g0 = rows.front().G_estimate;
    double sum = 0.0;
    for (std::size_t t = 1; t <= rows.size(); ++t) {
      sum += q2(t - 1);
      rep.T.push_back(static_cast<int>(t));
      rep.measured.push_back(sum / t);
      rep.bound.push_back(rep.vacuous ? std::numeric_limits<double>::infinity()
                                      : (g0 - f_lower) / (t * den) + rep.floor);
    }
  } else if (mode == "inverse_square") {
    const std::size_t r0 = 1;
    if (rows.size() < r0 + 2) throw ConfigError("trace too short for the schedule bound");
    const double c2 = (alpha * s * dc.D1 + alpha * alpha * dc.L_G * s * s) / den;
    const double g1 = rows[r0 + 1].G_estimate;
    double sum = 0.0;
    double tail = 0.0;
    for (std::size_t t = 1; r0 + t < rows.size(); ++t) {
      sum += q2(r0 + t);
      tail += 1.0 / static_cast<double>((t + r0) * (t + r0));
      rep.T.push_back(static_cast<int>(t));
      rep.measured.push_back(sum / t);
      rep.bound.push_back(rep.vacuous ? std::numeric_limits<double>::infinity()
                                      : (g1 - f_lower) / (t * den) + c2 * tail / t);
    }
    rep.floor = 0.0;
  } else {
    throw ConfigError("rate_report does not apply to delta mode '" + mode + "'");
  }
  return rep;
}

}  // namespace cmm
