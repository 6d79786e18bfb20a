#pragma once

// Catalog of named problem instances: the divergence example for plain
// GDA/OGDA, interval quadratics with an equality coupling, the box-QP
// hardness instance, the saddle/dual solution-set example, a jamming game and
// random strongly-convex-strongly-concave quadratics.

#include "cmm/problem.hpp"

#include <map>
#include <vector>

namespace cmm {

using Params = nlohmann::json;

namespace detail {

template <typename T>
T param(const Params& params, const char* key, T fallback) {
  if (params.is_object() && params.contains(key)) {
    try {
      return params.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("parameter '") + key + "': " + e.what());
    }
  }
  return fallback;
}

inline Vector param_vector(const Params& params, const char* key,
                           const Vector& fallback) {
  if (!(params.is_object() && params.contains(key))) return fallback;
  const auto v = param<std::vector<double>>(params, key, {});
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Row-major nested arrays [[..],[..]] or a flat array with explicit shape.
inline Matrix param_matrix(const Params& params, const char* key,
                           const Matrix& fallback) {
  if (!(params.is_object() && params.contains(key))) return fallback;
  const auto rows = param<std::vector<std::vector<double>>>(params, key, {});
  if (rows.empty()) return Matrix(0, 0);
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) {
      throw ConfigError(std::string("parameter '") + key + "' is ragged");
    }
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

inline std::pair<double, double> param_interval(const Params& params,
                                                const char* key,
                                                std::pair<double, double> fb) {
  const auto v = param<std::vector<double>>(params, key, {fb.first, fb.second});
  if (v.size() != 2 || v[0] > v[1]) {
    throw ConfigError(std::string("parameter '") + key +
                      "' must be an interval [lo, hi]");
  }
  return {v[0], v[1]};
}

inline Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

inline ProblemInstance quadratic_instance(std::string name, QuadraticForm qf,
                                          ConvexSet X, ConvexSet Y,
                                          CouplingConstraints cp) {
  ProblemInstance inst;
  inst.name = std::move(name);
  inst.objective = make_oracle(qf);
  inst.quadratic = std::move(qf);
  inst.set_x = std::move(X);
  inst.set_y = std::move(Y);
  inst.coupling = std::move(cp);
  finalize_constants(inst);
  return inst;
}

// Paired rows encoding a_xᵀx + a_yᵀy = rhs as two inequalities.
inline CouplingConstraints equality_rows(const Matrix& Ax, const Matrix& By,
                                         const Vector& rhs) {
  CouplingConstraints cp;
  cp.A.resize(2 * Ax.rows(), Ax.cols());
  cp.A << Ax, -Ax;
  cp.B.resize(2 * By.rows(), By.cols());
  cp.B << By, -By;
  cp.c.resize(2 * rhs.size());
  cp.c << rhs, -rhs;
  return cp;
}

// Curvature estimates from finite-difference Hessian-vector products along
// random unit directions at random feasible points; min/max widened by 10%.
inline void estimate_constants(ProblemInstance& inst, int directions,
                               std::uint64_t seed) {
  Rng rng(seed);
  const Eigen::Index n = inst.n();
  const Eigen::Index m = inst.m();
  const double h = 1e-6;
  double cx_min = std::numeric_limits<double>::infinity();
  double cy_min = cx_min;
  double lx_max = 0.0;
  double ly_max = 0.0;
  const auto& f = inst.objective;
  for (int s = 0; s < directions; ++s) {
    const Vector x = sample_in(inst.set_x, rng.uniform_vector(n, 0.0, 1.0));
    const Vector y = sample_in(inst.set_y, rng.uniform_vector(m, 0.0, 1.0));
    const Vector gx = f.grad_x(x, y);
    const Vector gy = f.grad_y(x, y);

    Vector dx = rng.normal_vector(n);
    dx /= dx.norm();
    Vector dy = rng.normal_vector(m);
    dy /= dy.norm();
    cx_min = std::min(cx_min, dx.dot(f.grad_x(x + h * dx, y) - gx) / h);
    cy_min = std::min(cy_min, -dy.dot(f.grad_y(x, y + h * dy) - gy) / h);

    Vector d = rng.normal_vector(n + m);
    d /= d.norm();
    const Vector x2 = x + h * d.head(n);
    const Vector y2 = y + h * d.tail(m);
    lx_max = std::max(lx_max, (f.grad_x(x2, y2) - gx).norm() / h);
    ly_max = std::max(ly_max, (f.grad_y(x2, y2) - gy).norm() / h);
  }
  auto& c = inst.constants;
  c.mu_x = std::max(0.0, 0.9 * cx_min);
  c.mu_y = std::max(0.0, 0.9 * cy_min);
  c.L_x = std::max(1.1 * lx_max, c.mu_x);
  c.L_y = std::max(1.1 * ly_max, c.mu_y);
  c.estimated = true;
}

}  // namespace detail

inline ProblemInstance make_eq23_divergence() {
  QuadraticForm qf{detail::scalar(1.0), detail::scalar(1.0), detail::scalar(1.0),
                   Vector::Zero(1), Vector::Zero(1), 0.0};
  // x − y − 1 = 0
  auto cp = detail::equality_rows(detail::scalar(1.0), detail::scalar(-1.0),
                                  Vector::Constant(1, 1.0));
  return detail::quadratic_instance("eq23-divergence", std::move(qf),
                                    ConvexSet::box(1, -1.0, 1.0),
                                    ConvexSet::box(1, -2.0, 0.0), std::move(cp));
}

// sign '+': f = x² − y²; sign '-': f = y² − x². Coupling x + y = rhs.
inline ProblemInstance make_prop1_quadratic(const Params& params) {
  const auto [xa, xb] = detail::param_interval(params, "x_iv", {0.0, 1.0});
  const auto [ya, yb] = detail::param_interval(params, "y_iv", {0.0, 1.0});
  const std::string sign = detail::param<std::string>(params, "sign", "+");
  if (sign != "+" && sign != "-") throw ConfigError("sign must be '+' or '-'");
  const double rhs = detail::param<double>(params, "rhs", 1.0);
  const bool coupled = detail::param<bool>(params, "coupled", true);
  const double s = sign == "+" ? 1.0 : -1.0;
  QuadraticForm qf{detail::scalar(2.0 * s), detail::scalar(0.0),
                   detail::scalar(2.0 * s), Vector::Zero(1), Vector::Zero(1),
                   0.0};
  CouplingConstraints cp;
  if (coupled) {
    cp = detail::equality_rows(detail::scalar(1.0), detail::scalar(1.0),
                               Vector::Constant(1, rhs));
  } else {
    cp = {Matrix::Zero(1, 1), Matrix::Zero(1, 1), Vector::Zero(1)};
  }
  auto inst = detail::quadratic_instance(
      "prop1-quadratic", std::move(qf), ConvexSet::box(1, xa, xb),
      ConvexSet::box(1, ya, yb), std::move(cp));
  inst.source = {{"name", "prop1-quadratic"}, {"params", params}};
  return inst;
}

// ‖x‖² + ½xᵀQy − ‖y‖² + dᵀx on [0,1]ⁿ × [0,1]ⁿ with x − y = 0 (paired rows).
inline ProblemInstance make_eq10_hard(const Params& params) {
  const int n = detail::param<int>(params, "n", 2);
  if (n < 1) throw ConfigError("eq10-hard needs n >= 1");
  Matrix Q = detail::param_matrix(params, "Q", -Matrix::Identity(n, n));
  Vector d = detail::param_vector(params, "d", Vector::Zero(n));
  if (Q.rows() != n || Q.cols() != n || d.size() != n) {
    throw ConfigError("eq10-hard: Q must be n x n and d of length n");
  }
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ConfigError("eq10-hard: Q must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(Q);
  if (es.eigenvalues().maxCoeff() > 1e-12) {
    throw ConfigError("eq10-hard: Q must be negative semidefinite");
  }
  const Matrix I = Matrix::Identity(n, n);
  QuadraticForm qf{2.0 * I, 0.5 * Q, 2.0 * I, d, Vector::Zero(n), 0.0};
  auto cp = detail::equality_rows(I, -I, Vector::Zero(n));
  auto inst = detail::quadratic_instance("eq10-hard", std::move(qf),
                                         ConvexSet::box(n, 0.0, 1.0),
                                         ConvexSet::box(n, 0.0, 1.0),
                                         std::move(cp));
  inst.source = {{"name", "eq10-hard"}, {"params", params}};
  return inst;
}

// Inner problem max_{y∈[0,2], y<=1} −y² + 2y with a degenerate outer set {0}.
inline ProblemInstance make_example3_dual() {
  QuadraticForm qf{detail::scalar(1.0), detail::scalar(0.0), detail::scalar(2.0),
                   Vector::Zero(1), Vector::Constant(1, 2.0), 0.0};
  CouplingConstraints cp{detail::scalar(0.0), detail::scalar(1.0),
                         Vector::Constant(1, 1.0)};
  return detail::quadratic_instance("example3-dual", std::move(qf),
                                    ConvexSet::box(1, 0.0, 0.0),
                                    ConvexSet::box(1, 0.0, 2.0), std::move(cp));
}

// min_{x∈[0,2]} max_{y∈[0,1], x+y<=1} x² − y²; inner problem empty for x > 1.
inline ProblemInstance make_example1_infeasible() {
  QuadraticForm qf{detail::scalar(2.0), detail::scalar(0.0), detail::scalar(2.0),
                   Vector::Zero(1), Vector::Zero(1), 0.0};
  CouplingConstraints cp{detail::scalar(1.0), detail::scalar(1.0),
                         Vector::Constant(1, 1.0)};
  return detail::quadratic_instance("example1-infeasible", std::move(qf),
                                    ConvexSet::box(1, 0.0, 2.0),
                                    ConvexSet::box(1, 0.0, 1.0), std::move(cp));
}

// Jamming game: the jammer (outer, minimizing) picks powers x, the user
// (inner, maximizing) picks powers y, rate
//   Σ log(1 + g_u,i y_i / (σ² + g_j,i x_i)) − (η/2)‖y‖²,
// budgets Σx <= x_budget, Σy <= y_budget, per-channel cap x + y <= c.
inline ProblemInstance make_jamming(const Params& params) {
  const int n = detail::param<int>(params, "n", 3);
  if (n < 1) throw ConfigError("jamming needs n >= 1");
  Vector gu = detail::param_vector(params, "user_gain", Vector::LinSpaced(n, 1.0, 2.0));
  Vector gj = detail::param_vector(params, "jammer_gain", Vector::Constant(n, 1.0));
  const double noise = detail::param<double>(params, "noise", 1.0);
  const double xb = detail::param<double>(params, "jammer_budget", 1.0);
  const double yb = detail::param<double>(params, "user_budget", 2.0);
  const double cap = detail::param<double>(params, "interference_temp", 1.5);
  const double eta = detail::param<double>(params, "eta", 0.0);
  if (gu.size() != n || gj.size() != n) {
    throw ConfigError("jamming gains must have length n");
  }
  if ((gu.array() <= 0).any() || (gj.array() <= 0).any() || noise <= 0 ||
      xb <= 0 || yb <= 0 || cap <= 0 || eta < 0) {
    throw ConfigError("jamming parameters must be positive (eta >= 0)");
  }
  ProblemInstance inst;
  inst.name = "jamming";
  inst.objective.eval = [=](const Vector& x, const Vector& y) {
    double r = 0.0;
    for (int i = 0; i < n; ++i) {
      r += std::log1p(gu[i] * y[i] / (noise + gj[i] * x[i]));
    }
    return r - 0.5 * eta * y.squaredNorm();
  };
  inst.objective.grad_x = [=](const Vector& x, const Vector& y) {
    Vector g(n);
    for (int i = 0; i < n; ++i) {
      const double s = noise + gj[i] * x[i];
      g[i] = gj[i] / (s + gu[i] * y[i]) - gj[i] / s;
    }
    return g;
  };
  inst.objective.grad_y = [=](const Vector& x, const Vector& y) {
    Vector g(n);
    for (int i = 0; i < n; ++i) {
      g[i] = gu[i] / (noise + gj[i] * x[i] + gu[i] * y[i]) - eta * y[i];
    }
    return g;
  };
  const Vector zeros = Vector::Zero(n);
  const Vector inf = Vector::Constant(n, std::numeric_limits<double>::infinity());
  inst.set_x = ConvexSet::simplex(xb, SimplexMode::le, zeros, inf);
  inst.set_y = ConvexSet::simplex(yb, SimplexMode::le, zeros, inf);
  inst.coupling = {Matrix::Identity(n, n), Matrix::Identity(n, n),
                   Vector::Constant(n, cap)};
  inst.source = {{"name", "jamming"}, {"params", params}};
  finalize_constants(inst);
  detail::estimate_constants(inst, 1000, 0x6a616d);
  // log-rate curvature vanishes as powers grow; only η certifies concavity.
  if (eta <= 0.0) inst.constants.mu_y = 0.0;
  return inst;
}

// Random strongly-convex-strongly-concave quadratic on boxes [-1,1] with
// coupling rows that leave y = 0 strictly feasible for every x.
inline ProblemInstance make_random_quadratic(const Params& params) {
  const int n = detail::param<int>(params, "n", 2);
  const int m = detail::param<int>(params, "m", 2);
  const int k = detail::param<int>(params, "k", 2);
  const auto seed = detail::param<std::uint64_t>(params, "seed", 1);
  const double mu = detail::param<double>(params, "mu", 0.5);
  const double margin_lo = detail::param<double>(params, "margin_lo", 0.05);
  const double margin_hi = detail::param<double>(params, "margin_hi", 0.3);
  const bool coupled = detail::param<bool>(params, "coupled", true);
  if (n < 1 || m < 1 || k < 1 || mu <= 0.0) {
    throw ConfigError("random-quadratic needs n, m, k >= 1 and mu > 0");
  }
  Rng rng(seed);
  const Matrix Mx = rng.normal_matrix(n, n);
  const Matrix My = rng.normal_matrix(m, m);
  QuadraticForm qf;
  qf.P = 0.5 * Mx * Mx.transpose() + mu * Matrix::Identity(n, n);
  qf.S = 0.5 * My * My.transpose() + mu * Matrix::Identity(m, m);
  qf.R = rng.normal_matrix(n, m);
  qf.p = rng.normal_vector(n);
  qf.q = 2.0 * rng.normal_vector(m);
  qf.r0 = 0.0;
  CouplingConstraints cp;
  if (coupled) {
    cp.A = rng.normal_matrix(k, n);
    cp.B = rng.normal_matrix(k, m);
    cp.c.resize(k);
    for (int i = 0; i < k; ++i) {
      cp.c[i] = cp.A.row(i).cwiseAbs().sum() + rng.uniform(margin_lo, margin_hi);
    }
  } else {
    cp.A = Matrix::Zero(k, n);
    cp.B = Matrix::Zero(k, m);
    cp.c = Vector::Constant(k, 1.0);
  }
  auto inst = detail::quadratic_instance("random-quadratic", std::move(qf),
                                         ConvexSet::box(n, -1.0, 1.0),
                                         ConvexSet::box(m, -1.0, 1.0),
                                         std::move(cp));
  inst.source = {{"name", "random-quadratic"}, {"params", params}};
  return inst;
}

// Fully user-specified quadratic; every block is a parameter.
inline ProblemInstance make_custom_quadratic(const Params& params) {
  QuadraticForm qf;
  qf.P = detail::param_matrix(params, "P", detail::scalar(1.0));
  qf.R = detail::param_matrix(params, "R", Matrix::Zero(qf.P.rows(), 1));
  qf.S = detail::param_matrix(params, "S", detail::scalar(1.0));
  qf.p = detail::param_vector(params, "p", Vector::Zero(qf.P.rows()));
  qf.q = detail::param_vector(params, "q", Vector::Zero(qf.S.rows()));
  qf.r0 = detail::param<double>(params, "r0", 0.0);
  const Eigen::Index n = qf.P.rows();
  const Eigen::Index m = qf.S.rows();
  if (qf.R.rows() != n || qf.R.cols() != m || qf.p.size() != n ||
      qf.q.size() != m || qf.P.cols() != n || qf.S.cols() != m) {
    throw ConfigError("custom-quadratic: inconsistent block shapes");
  }
  Vector xlo = detail::param_vector(params, "x_lo", Vector::Constant(n, -1.0));
  Vector xhi = detail::param_vector(params, "x_hi", Vector::Constant(n, 1.0));
  Vector ylo = detail::param_vector(params, "y_lo", Vector::Constant(m, -1.0));
  Vector yhi = detail::param_vector(params, "y_hi", Vector::Constant(m, 1.0));
  CouplingConstraints cp;
  cp.A = detail::param_matrix(params, "A", Matrix::Zero(1, n));
  cp.B = detail::param_matrix(params, "B", Matrix::Zero(1, m));
  cp.c = detail::param_vector(params, "c", Vector::Zero(cp.A.rows()));
  if (cp.A.cols() != n || cp.B.cols() != m || cp.B.rows() != cp.A.rows() ||
      cp.c.size() != cp.A.rows() || xlo.size() != n || xhi.size() != n ||
      ylo.size() != m || yhi.size() != m) {
    throw ConfigError("custom-quadratic: inconsistent coupling or box shapes");
  }
  auto inst = detail::quadratic_instance(
      detail::param<std::string>(params, "label", "custom-quadratic"),
      std::move(qf), ConvexSet::box(xlo, xhi), ConvexSet::box(ylo, yhi),
      std::move(cp));
  inst.source = {{"name", "custom-quadratic"}, {"params", params}};
  return inst;
}

inline const std::vector<std::pair<std::string, std::string>>& zoo_catalog() {
  static const std::vector<std::pair<std::string, std::string>> catalog = {
      {"custom-quadratic", "user-specified quadratic on boxes (P, R, S, p, q, A, B, c)"},
      {"eq10-hard", "box QP hardness instance, x - y = 0 coupling (n, Q, d)"},
      {"eq23-divergence", "1-D example where primal GDA/OGDA stall at (0.5, -0.5)"},
      {"example1-infeasible", "inner problem empty for x in (1, 2]"},
      {"example3-dual", "max_{y in [0,2], y <= 1} -y^2 + 2y saddle/dual sets"},
      {"jamming", "multi-channel jamming rate game (n, gains, noise, budgets, eta)"},
      {"prop1-quadratic", "x^2 - y^2 on intervals with x + y = rhs (x_iv, y_iv, sign)"},
      {"random-quadratic", "random strongly-convex-concave quadratic (n, m, k, seed)"},
  };
  return catalog;
}

inline ProblemInstance zoo_instance(const std::string& name,
                                    const Params& params = Params::object()) {
  ProblemInstance inst;
  if (name == "eq23-divergence") {
    inst = make_eq23_divergence();
  } else if (name == "prop1-quadratic") {
    inst = make_prop1_quadratic(params);
  } else if (name == "eq10-hard") {
    inst = make_eq10_hard(params);
  } else if (name == "example3-dual") {
    inst = make_example3_dual();
  } else if (name == "example1-infeasible") {
    inst = make_example1_infeasible();
  } else if (name == "jamming") {
    inst = make_jamming(params);
  } else if (name == "random-quadratic") {
    inst = make_random_quadratic(params);
  } else if (name == "custom-quadratic") {
    inst = make_custom_quadratic(params);
  } else {
    throw ConfigError("unknown zoo instance '" + name + "'");
  }
  inst.source = {{"name", name}, {"params", params}};
  return inst;
}

}  // namespace cmm
