#pragma once

// Problem abstraction for min_x max_{y : Ax + By <= c} f(x, y): objective
// oracle, smoothness/convexity constants, coupling rows, the Lagrangian
// f - λᵀ(Ax + By - c) and a sampled feasibility checker.

#include "cmm/core.hpp"
#include "cmm/geometry.hpp"
#include "cmm/rng.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <limits>
#include <optional>
#include <string>

namespace cmm {

struct ObjectiveOracle {
  std::function<double(const Vector&, const Vector&)> eval;
  std::function<Vector(const Vector&, const Vector&)> grad_x;
  std::function<Vector(const Vector&, const Vector&)> grad_y;
};

// f(x,y) = ½xᵀPx + xᵀRy − ½yᵀSy + pᵀx + qᵀy + r0
struct QuadraticForm {
  Matrix P;
  Matrix R;
  Matrix S;
  Vector p;
  Vector q;
  double r0 = 0.0;

  Eigen::Index n() const { return P.rows(); }
  Eigen::Index m() const { return S.rows(); }

  double eval(const Vector& x, const Vector& y) const {
    return 0.5 * x.dot(P * x) + x.dot(R * y) - 0.5 * y.dot(S * y) + p.dot(x) +
           q.dot(y) + r0;
  }
  Vector grad_x(const Vector& x, const Vector& y) const {
    return P * x + R * y + p;
  }
  Vector grad_y(const Vector& x, const Vector& y) const {
    return R.transpose() * x - S * y + q;
  }

  void validate() const {
    require_dim(P.cols(), P.rows(), "QuadraticForm P");
    require_dim(S.cols(), S.rows(), "QuadraticForm S");
    require_dim(R.rows(), P.rows(), "QuadraticForm R rows");
    require_dim(R.cols(), S.rows(), "QuadraticForm R cols");
    require_dim(p.size(), P.rows(), "QuadraticForm p");
    require_dim(q.size(), S.rows(), "QuadraticForm q");
  }
};

inline ObjectiveOracle make_oracle(const QuadraticForm& qf) {
  qf.validate();
  return ObjectiveOracle{
      [qf](const Vector& x, const Vector& y) { return qf.eval(x, y); },
      [qf](const Vector& x, const Vector& y) { return qf.grad_x(x, y); },
      [qf](const Vector& x, const Vector& y) { return qf.grad_y(x, y); }};
}

struct ProblemConstants {
  double mu_x = 0.0;  // strong convexity in x
  double mu_y = 0.0;  // strong concavity in y
  double L_x = 1.0;   // Lipschitz constant of ∇_x f w.r.t. (x, y)
  double L_y = 1.0;   // Lipschitz constant of ∇_y f w.r.t. (x, y)
  double D = 1.0;     // ‖x‖, ‖y‖ <= D on X, Y
  double f_lower = 0.0;
  double f_upper = 0.0;
  bool estimated = false;  // sampled rather than derived analytically

  bool strongly_convex_concave() const { return mu_x > 0.0 && mu_y > 0.0; }
  double mu() const { return std::min(mu_x, mu_y); }
  double L() const { return std::max(L_x, L_y); }
};

struct CouplingConstraints {
  Matrix A;  // k x n
  Matrix B;  // k x m
  Vector c;  // k

  Eigen::Index k() const { return c.size(); }
  double sigma_max() const {
    return std::max(spectral_norm(A), spectral_norm(B));
  }
  Vector residual(const Vector& x, const Vector& y) const {
    return A * x + B * y - c;
  }
};

struct ProblemInstance {
  std::string name;
  ObjectiveOracle objective;
  ProblemConstants constants;
  ConvexSet set_x;
  ConvexSet set_y;
  CouplingConstraints coupling;
  // Present when f is quadratic; used for serialization and closed forms.
  std::optional<QuadraticForm> quadratic;
  // Zoo name + parameters for instances that are rebuilt by name.
  nlohmann::json source = nlohmann::json::object();

  Eigen::Index n() const { return set_x.dim(); }
  Eigen::Index m() const { return set_y.dim(); }
  Eigen::Index k() const { return coupling.k(); }

  void validate() const {
    require_dim(coupling.A.rows(), k(), "coupling A rows");
    require_dim(coupling.B.rows(), k(), "coupling B rows");
    require_dim(coupling.A.cols(), n(), "coupling A cols");
    require_dim(coupling.B.cols(), m(), "coupling B cols");
    if (quadratic) {
      require_dim(quadratic->n(), n(), "quadratic n");
      require_dim(quadratic->m(), m(), "quadratic m");
    }
  }
};

inline void check_point(const ProblemInstance& inst, const Vector& x,
                        const Vector& y, const Vector& lambda) {
  require_dim(x.size(), inst.n(), "x");
  require_dim(y.size(), inst.m(), "y");
  require_dim(lambda.size(), inst.k(), "lambda");
  require_nonnegative(lambda, "lambda");
}

// L(x, y, λ) = f(x, y) − λᵀ(Ax + By − c)
inline double lagrangian_eval(const ProblemInstance& inst, const Vector& x,
                              const Vector& y, const Vector& lambda) {
  check_point(inst, x, y, lambda);
  return inst.objective.eval(x, y) -
         lambda.dot(inst.coupling.residual(x, y));
}

struct LagrangianGrads {
  Vector gx;
  Vector gy;
  Vector glambda;
};

inline LagrangianGrads lagrangian_grads(const ProblemInstance& inst,
                                        const Vector& x, const Vector& y,
                                        const Vector& lambda) {
  check_point(inst, x, y, lambda);
  const auto& cp = inst.coupling;
  return {inst.objective.grad_x(x, y) - cp.A.transpose() * lambda,
          inst.objective.grad_y(x, y) - cp.B.transpose() * lambda,
          -cp.residual(x, y)};
}

// Point of `set` obtained by mapping a unit-cube point into the bounding box
// and projecting.
inline Vector sample_in(const ConvexSet& set, const Vector& unit) {
  const Box bb = bounding_box(set);
  Vector v = bb.lo + unit.cwiseProduct(bb.hi - bb.lo);
  return project(set, v);
}

// ---------------------------------------------------------------------------
// Constants.

struct QuadraticConstants {
  double mu_x, mu_y, L_x, L_y;
};

inline QuadraticConstants quadratic_constants(const QuadraticForm& qf) {
  auto min_eig = [](const Matrix& M) {
    if (M.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (M + M.transpose()));
    return es.eigenvalues().minCoeff();
  };
  Matrix row_x(qf.n(), qf.n() + qf.m());
  row_x << qf.P, qf.R;
  Matrix row_y(qf.m(), qf.n() + qf.m());
  row_y << qf.R.transpose(), qf.S;
  return {min_eig(qf.P), min_eig(qf.S), spectral_norm(row_x),
          spectral_norm(row_y)};
}

struct SampledBounds {
  double f_lower;
  double f_upper;
};

// min/max of f over `samples` quasi-random feasible points, widened by one
// sample standard deviation.
inline SampledBounds sampled_bounds(const ProblemInstance& inst, int samples) {
  const Eigen::Index n = inst.n();
  const Eigen::Index m = inst.m();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double sum = 0.0;
  double sum2 = 0.0;
  for (int s = 1; s <= samples; ++s) {
    const Vector u = halton(static_cast<std::uint64_t>(s), n + m);
    const Vector x = sample_in(inst.set_x, u.head(n));
    const Vector y = sample_in(inst.set_y, u.tail(m));
    const double f = inst.objective.eval(x, y);
    lo = std::min(lo, f);
    hi = std::max(hi, f);
    sum += f;
    sum2 += f * f;
  }
  const double mean = sum / samples;
  const double sd = std::sqrt(std::max(0.0, sum2 / samples - mean * mean));
  return {lo - sd, hi + sd};
}

// ---------------------------------------------------------------------------
// Feasibility.

struct InnerFeasibility {
  Vector y;
  double residual = 0.0;  // max_i [Ax + By − c]_i^+ at the best y found
  double margin = 0.0;    // best min_i (c − Ax − By)_i found
};

// For a fixed x, searches Y for a point satisfying the coupling rows
// (projected gradient on ½‖[Ax + By − c]^+‖²) and then for the largest
// uniform slack (projected subgradient ascent on min_i (c − Ax − By)_i).
inline InnerFeasibility inner_feasibility(const ProblemInstance& inst,
                                          const Vector& x, int iters = 2000) {
  const auto& cp = inst.coupling;
  InnerFeasibility out;
  out.y = project(inst.set_y, Vector::Zero(inst.m()));
  if (inst.k() == 0) {
    out.margin = std::numeric_limits<double>::infinity();
    return out;
  }
  const Vector base = cp.A * x - cp.c;
  const double bn = spectral_norm(cp.B);
  Vector y = out.y;
  if (bn > 0.0) {
    const double step = 1.0 / (bn * bn);
    for (int it = 0; it < iters; ++it) {
      const Vector viol = positive_part(base + cp.B * y);
      if (viol.maxCoeff() <= 1e-13) break;
      y = project(inst.set_y, y - step * (cp.B.transpose() * viol));
    }
  }
  out.y = y;
  out.residual = std::max(0.0, (base + cp.B * y).maxCoeff());

  auto slack_of = [&](const Vector& v) { return (-(base + cp.B * v)).minCoeff(); };
  double best = slack_of(y);
  Vector cur = y;
  if (bn > 0.0) {
    for (int it = 1; it <= iters; ++it) {
      const Vector s = -(base + cp.B * cur);
      Eigen::Index i;
      s.minCoeff(&i);
      const double step = 0.5 / (bn * std::sqrt(static_cast<double>(it)));
      cur = project(inst.set_y, cur - step * cp.B.row(i).transpose());
      const double val = slack_of(cur);
      if (val > best) best = val;
    }
  }
  out.margin = best;
  return out;
}

struct FeasibilityReport {
  int samples = 0;
  int infeasible = 0;
  double worst_residual = 0.0;
  Vector worst_x;
  double slater_margin = std::numeric_limits<double>::infinity();

  bool feasible(double tol = 1e-8) const { return worst_residual <= tol; }
};

inline FeasibilityReport feasibility_check(const ProblemInstance& inst,
                                           int samples, std::uint64_t seed) {
  if (samples < 1) throw ConfigError("feasibility_check needs samples >= 1");
  FeasibilityReport rep;
  rep.samples = samples;
  Rng rng(seed);
  const std::uint64_t offset = rng() % 1024;
  for (int s = 0; s < samples; ++s) {
    const Vector u = halton(offset + 1 + static_cast<std::uint64_t>(s), inst.n());
    const Vector x = sample_in(inst.set_x, u);
    const InnerFeasibility f = inner_feasibility(inst, x);
    if (f.residual > 1e-8) ++rep.infeasible;
    if (f.residual >= rep.worst_residual) {
      rep.worst_residual = f.residual;
      rep.worst_x = x;
    }
    rep.slater_margin = std::min(rep.slater_margin, f.margin);
  }
  return rep;
}

// Fills D, f_lower, f_upper and (for quadratics) the curvature constants.
inline void finalize_constants(ProblemInstance& inst, int bound_samples = 10000) {
  inst.validate();
  inst.constants.D =
      std::max(radius_bound(inst.set_x), radius_bound(inst.set_y));
  if (inst.quadratic) {
    const auto qc = quadratic_constants(*inst.quadratic);
    inst.constants.mu_x = std::max(0.0, qc.mu_x);
    inst.constants.mu_y = std::max(0.0, qc.mu_y);
    inst.constants.L_x = qc.L_x;
    inst.constants.L_y = qc.L_y;
    inst.constants.estimated = false;
  }
  if (bound_samples > 0) {
    const auto b = sampled_bounds(inst, bound_samples);
    inst.constants.f_lower = b.f_lower;
    inst.constants.f_upper = b.f_upper;
  }
}

}  // namespace cmm
