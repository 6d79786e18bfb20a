#pragma once

// Euclidean projection oracles for the feasible sets used by the solvers:
// boxes, capped simplices, the nonnegative orthant, balls, and polytopes
// built from box / affine-equality / half-space pieces (projected with
// Dykstra's algorithm).

#include "cmm/core.hpp"

#include <algorithm>
#include <limits>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace cmm {

struct Box {
  Vector lo;
  Vector hi;
};

enum class SimplexMode { eq, le };

// {lo <= v <= hi, sum(v) = budget} (eq) or {... sum(v) <= budget} (le).
// hi entries may be +inf.
struct Simplex {
  double budget = 1.0;
  SimplexMode mode = SimplexMode::eq;
  Vector lo;
  Vector hi;
};

struct NonnegOrthant {
  Eigen::Index dim = 0;
};

struct Ball {
  Vector center;
  double radius = 1.0;
};

// {v : C v = d}. The projector Cᵀ(CCᵀ)⁺ is precomputed once.
class AffineEquality {
 public:
  AffineEquality() = default;
  AffineEquality(Matrix C, Vector d) : C_(std::move(C)), d_(std::move(d)) {
    require_dim(d_.size(), C_.rows(), "AffineEquality rhs");
    Matrix gram = C_ * C_.transpose();
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(gram);
    correction_ = C_.transpose() * cod.pseudoInverse();
  }

  const Matrix& C() const { return C_; }
  const Vector& d() const { return d_; }

  Vector project(const Vector& v) const {
    return v - correction_ * (C_ * v - d_);
  }
  double residual(const Vector& v) const {
    if (C_.rows() == 0) return 0.0;
    return (C_ * v - d_).cwiseAbs().maxCoeff();
  }

 private:
  Matrix C_;
  Vector d_;
  Matrix correction_;
};

// {v : aᵀv <= b}
struct Halfspace {
  Vector a;
  double b = 0.0;
};

using PolytopeComponent = std::variant<Box, AffineEquality, Halfspace>;

struct DykstraOptions {
  double tolerance = 1e-10;
  int max_sweeps = 10000;
};

struct Polytope {
  Eigen::Index dim = 0;
  std::vector<PolytopeComponent> components;
  DykstraOptions options{};
};

class ConvexSet {
 public:
  using Variant = std::variant<Box, Simplex, NonnegOrthant, Ball, Polytope>;

  ConvexSet() : set_(NonnegOrthant{0}) {}
  ConvexSet(Variant v) : set_(std::move(v)) { validate(); }  // NOLINT

  static ConvexSet box(Vector lo, Vector hi) {
    return ConvexSet(Box{std::move(lo), std::move(hi)});
  }
  static ConvexSet box(Eigen::Index dim, double lo, double hi) {
    return box(Vector::Constant(dim, lo), Vector::Constant(dim, hi));
  }
  static ConvexSet simplex(double budget, SimplexMode mode, Vector lo,
                           Vector hi) {
    return ConvexSet(Simplex{budget, mode, std::move(lo), std::move(hi)});
  }
  static ConvexSet orthant(Eigen::Index dim) {
    return ConvexSet(NonnegOrthant{dim});
  }
  static ConvexSet ball(Vector center, double radius) {
    return ConvexSet(Ball{std::move(center), radius});
  }
  static ConvexSet polytope(Eigen::Index dim,
                            std::vector<PolytopeComponent> components,
                            DykstraOptions options = {}) {
    return ConvexSet(Polytope{dim, std::move(components), options});
  }

  const Variant& variant() const { return set_; }

  Eigen::Index dim() const {
    return std::visit(
        [](const auto& s) -> Eigen::Index {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Box>) return s.lo.size();
          if constexpr (std::is_same_v<T, Simplex>) return s.lo.size();
          if constexpr (std::is_same_v<T, NonnegOrthant>) return s.dim;
          if constexpr (std::is_same_v<T, Ball>) return s.center.size();
          if constexpr (std::is_same_v<T, Polytope>) return s.dim;
        },
        set_);
  }

  bool is_compact() const {
    if (std::holds_alternative<NonnegOrthant>(set_)) return false;
    if (const auto* p = std::get_if<Polytope>(&set_)) {
      return std::any_of(p->components.begin(), p->components.end(),
                         [](const auto& c) {
                           return std::holds_alternative<Box>(c);
                         });
    }
    return true;
  }

  const char* kind() const {
    static constexpr const char* names[] = {"box", "simplex", "orthant",
                                            "ball", "polytope"};
    return names[set_.index()];
  }

 private:
  void validate() const;

  Variant set_;
};

namespace detail {

inline Vector clamp(const Vector& v, const Vector& lo, const Vector& hi) {
  return v.cwiseMax(lo).cwiseMin(hi);
}

inline double box_residual(const Box& b, const Vector& v) {
  if (v.size() == 0) return 0.0;
  return std::max({0.0, (b.lo - v).maxCoeff(), (v - b.hi).maxCoeff()});
}

// Sum of clamp(v - tau, lo, hi); nonincreasing in tau.
inline double shifted_sum(const Vector& v, const Vector& lo, const Vector& hi,
                          double tau) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    s += std::clamp(v[i] - tau, lo[i], hi[i]);
  }
  return s;
}

// Projection onto {lo <= x <= hi, sum(x) = budget}: bisection on the scalar
// multiplier tau of the sum constraint, then an exact solve on the free set.
inline Vector project_capped_simplex_eq(const Vector& v, double budget,
                                        const Vector& lo, const Vector& hi) {
  const Eigen::Index n = v.size();
  if (n == 0) return v;
  const double lo_sum = lo.sum();
  const double slack = budget - lo_sum;
  double hi_sum = 0.0;
  bool unbounded = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::isfinite(hi[i])) {
      hi_sum += hi[i];
    } else {
      unbounded = true;
    }
  }
  const double scale = std::max(1.0, std::abs(budget));
  if (slack < -1e-12 * scale || (!unbounded && budget > hi_sum + 1e-12 * scale)) {
    throw InfeasibleError("capped simplex is empty",
                          slack < 0 ? -slack : budget - hi_sum);
  }
  if (slack <= 0.0) return lo;
  if (!unbounded && budget >= hi_sum) return hi;

  double tau_lo = std::numeric_limits<double>::infinity();
  double tau_hi = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double cap = std::isfinite(hi[i]) ? hi[i] : lo[i] + slack;
    tau_lo = std::min(tau_lo, v[i] - cap);
    tau_hi = std::max(tau_hi, v[i] - lo[i]);
  }
  // sum(tau_lo) >= budget >= sum(tau_hi)
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (tau_lo + tau_hi);
    if (tau_hi - tau_lo <= 1e-12 * std::max(1.0, std::abs(mid))) break;
    if (shifted_sum(v, lo, hi, mid) > budget) {
      tau_lo = mid;
    } else {
      tau_hi = mid;
    }
  }
  double tau = 0.5 * (tau_lo + tau_hi);

  // Exact multiplier for the active pattern at tau.
  double fixed = 0.0;
  double free_sum = 0.0;
  int free_count = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = v[i] - tau;
    if (s <= lo[i]) {
      fixed += lo[i];
    } else if (s >= hi[i]) {
      fixed += hi[i];
    } else {
      free_sum += v[i];
      ++free_count;
    }
  }
  if (free_count > 0) {
    const double exact = (free_sum + fixed - budget) / free_count;
    if (std::abs(exact - tau) <= 1e-6 * std::max(1.0, std::abs(tau))) {
      tau = exact;
    }
  }
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out[i] = std::clamp(v[i] - tau, lo[i], hi[i]);
  }
  return out;
}

inline Vector project_component(const PolytopeComponent& c, const Vector& v) {
  return std::visit(
      [&](const auto& s) -> Vector {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          return clamp(v, s.lo, s.hi);
        } else if constexpr (std::is_same_v<T, AffineEquality>) {
          return s.project(v);
        } else {
          const double viol = s.a.dot(v) - s.b;
          const double nrm2 = s.a.squaredNorm();
          if (viol <= 0.0 || nrm2 == 0.0) return v;
          return v - (viol / nrm2) * s.a;
        }
      },
      c);
}

inline double component_residual(const PolytopeComponent& c, const Vector& v) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          return box_residual(s, v);
        } else if constexpr (std::is_same_v<T, AffineEquality>) {
          return s.residual(v);
        } else {
          return std::max(0.0, s.a.dot(v) - s.b);
        }
      },
      c);
}

inline double polytope_residual(const Polytope& p, const Vector& v) {
  double r = 0.0;
  for (const auto& c : p.components) r = std::max(r, component_residual(c, v));
  return r;
}

// Dykstra's alternating projections: converges to the Euclidean projection
// onto the intersection, not just to some point of it.
inline Vector dykstra(const Polytope& p, const Vector& v) {
  const std::size_t m = p.components.size();
  if (m == 0) return v;
  if (m == 1) return project_component(p.components.front(), v);
  std::vector<Vector> increments(m, Vector::Zero(v.size()));
  Vector x = v;
  Vector prev;
  for (int sweep = 0; sweep < p.options.max_sweeps; ++sweep) {
    prev = x;
    // x alone can stall for a sweep while the increments still move.
    double inc_change = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      Vector shifted = x + increments[i];
      x = project_component(p.components[i], shifted);
      const Vector inc = shifted - x;
      inc_change += (inc - increments[i]).squaredNorm();
      increments[i] = inc;
    }
    if ((x - prev).norm() <= p.options.tolerance &&
        std::sqrt(inc_change) <= p.options.tolerance &&
        polytope_residual(p, x) <= 1e-9) {
      return x;
    }
  }
  const double res = polytope_residual(p, x);
  if (res > 1e-8) {
    throw InfeasibleError("Dykstra projection did not converge", res);
  }
  return x;
}

// Projection onto {lo <= v <= hi, Cv = d} by a semismooth Newton method on
// the multipliers ν of the equality rows: x(ν) = clamp(v − Cᵀν, lo, hi) and
// the concave dual q(ν) = ½‖x(ν) − v‖² + νᵀ(Cx(ν) − d). Returns nullopt when
// the iteration stalls, leaving the caller to fall back to Dykstra.
inline std::optional<Vector> project_box_affine(const Box& box,
                                                const AffineEquality& eq,
                                                const Vector& v) {
  const Matrix& C = eq.C();
  const Vector& d = eq.d();
  const Eigen::Index q = C.rows();
  if (q == 0) return clamp(v, box.lo, box.hi);
  auto primal = [&](const Vector& nu) {
    return clamp(v - C.transpose() * nu, box.lo, box.hi);
  };
  auto dual = [&](const Vector& nu, const Vector& x) {
    return 0.5 * (x - v).squaredNorm() + nu.dot(C * x - d);
  };
  const double scale = 1.0 + d.cwiseAbs().maxCoeff() + v.cwiseAbs().maxCoeff();
  Vector nu = Vector::Zero(q);
  Vector x = primal(nu);
  double val = dual(nu, x);
  for (int it = 0; it < 200; ++it) {
    const Vector grad = C * x - d;
    if (grad.cwiseAbs().maxCoeff() <= 1e-13 * scale) return x;
    Matrix H = Matrix::Zero(q, q);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double raw = v[i] - C.col(i).dot(nu);
      if (raw > box.lo[i] && raw < box.hi[i]) {
        H.noalias() += C.col(i) * C.col(i).transpose();
      }
    }
    H.diagonal().array() += 1e-12 * (1.0 + H.diagonal().cwiseAbs().maxCoeff());
    const Vector step = H.ldlt().solve(grad);
    if (!step.allFinite()) return std::nullopt;
    const double slope = grad.dot(step);
    double t = 1.0;
    bool moved = false;
    const double gnorm = grad.norm();
    for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
      const Vector cand = nu + t * step;
      const Vector xc = primal(cand);
      const double vc = dual(cand, xc);
      // Near the solution the dual is flat to rounding; accept a step that
      // halves the equality residual instead.
      const bool flat = std::abs(vc - val) <= 1e-13 * (1.0 + std::abs(val));
      if (vc >= val + 1e-4 * t * slope ||
          (flat && (C * xc - d).norm() <= 0.5 * gnorm)) {
        nu = cand;
        x = xc;
        val = vc;
        moved = true;
        break;
      }
    }
    if (!moved) return std::nullopt;
  }
  return std::nullopt;
}

// Box ∩ affine polytopes get the Newton projector.
inline Vector project_polytope(const Polytope& p, const Vector& v) {
  if (p.components.size() == 2) {
    const Box* b = nullptr;
    const AffineEquality* e = nullptr;
    for (const auto& c : p.components) {
      if (const auto* bb = std::get_if<Box>(&c)) b = bb;
      if (const auto* ee = std::get_if<AffineEquality>(&c)) e = ee;
    }
    if (b && e) {
      if (auto x = project_box_affine(*b, *e, v)) {
        if (polytope_residual(p, *x) <= 1e-9) return *x;
      }
    }
  }
  return dykstra(p, v);
}

}  // namespace detail

inline void ConvexSet::validate() const {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          require_dim(s.hi.size(), s.lo.size(), "Box bounds");
          if ((s.hi - s.lo).minCoeff() < 0.0 && s.lo.size() > 0) {
            throw ConfigError("Box has lo > hi");
          }
        } else if constexpr (std::is_same_v<T, Simplex>) {
          require_dim(s.hi.size(), s.lo.size(), "Simplex bounds");
        } else if constexpr (std::is_same_v<T, Ball>) {
          if (!(s.radius >= 0.0)) throw ConfigError("Ball radius is negative");
        } else if constexpr (std::is_same_v<T, Polytope>) {
          for (const auto& c : s.components) {
            std::visit(
                [&](const auto& piece) {
                  using P = std::decay_t<decltype(piece)>;
                  if constexpr (std::is_same_v<P, Box>) {
                    require_dim(piece.lo.size(), s.dim, "Polytope box");
                  } else if constexpr (std::is_same_v<P, AffineEquality>) {
                    require_dim(piece.C().cols(), s.dim, "Polytope equality");
                  } else {
                    require_dim(piece.a.size(), s.dim, "Polytope halfspace");
                  }
                },
                c);
          }
        }
      },
      set_);
}

// Euclidean projection of v onto the set.
inline Vector project(const ConvexSet& set, const Vector& v) {
  require_dim(v.size(), set.dim(), "project");
  return std::visit(
      [&](const auto& s) -> Vector {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          return detail::clamp(v, s.lo, s.hi);
        } else if constexpr (std::is_same_v<T, Simplex>) {
          if (s.mode == SimplexMode::le) {
            Vector c = detail::clamp(v, s.lo, s.hi);
            if (c.sum() <= s.budget) return c;
          }
          return detail::project_capped_simplex_eq(v, s.budget, s.lo, s.hi);
        } else if constexpr (std::is_same_v<T, NonnegOrthant>) {
          return positive_part(v);
        } else if constexpr (std::is_same_v<T, Ball>) {
          const Vector diff = v - s.center;
          const double nrm = diff.norm();
          if (nrm <= s.radius) return v;
          return s.center + (s.radius / nrm) * diff;
        } else {
          return detail::project_polytope(s, v);
        }
      },
      set.variant());
}

// Largest positive violation among the constraints defining the set.
inline double membership_residual(const ConvexSet& set, const Vector& v) {
  require_dim(v.size(), set.dim(), "membership_residual");
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          return detail::box_residual(s, v);
        } else if constexpr (std::is_same_v<T, Simplex>) {
          const double box = detail::box_residual(Box{s.lo, s.hi}, v);
          const double gap = v.sum() - s.budget;
          return std::max(box, s.mode == SimplexMode::eq ? std::abs(gap)
                                                         : std::max(0.0, gap));
        } else if constexpr (std::is_same_v<T, NonnegOrthant>) {
          return v.size() ? std::max(0.0, -v.minCoeff()) : 0.0;
        } else if constexpr (std::is_same_v<T, Ball>) {
          return std::max(0.0, (v - s.center).norm() - s.radius);
        } else {
          return detail::polytope_residual(s, v);
        }
      },
      set.variant());
}

// Axis-aligned box containing the set. Throws for unbounded sets.
inline Box bounding_box(const ConvexSet& set) {
  return std::visit(
      [&](const auto& s) -> Box {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          return s;
        } else if constexpr (std::is_same_v<T, Simplex>) {
          const double slack = std::max(0.0, s.budget - s.lo.sum());
          Vector hi = s.hi.cwiseMin((s.lo.array() + slack).matrix());
          return Box{s.lo, hi};
        } else if constexpr (std::is_same_v<T, NonnegOrthant>) {
          throw ConfigError("nonnegative orthant has no bounding box");
        } else if constexpr (std::is_same_v<T, Ball>) {
          return Box{(s.center.array() - s.radius).matrix(),
                     (s.center.array() + s.radius).matrix()};
        } else {
          Vector lo = Vector::Constant(s.dim,
                                       -std::numeric_limits<double>::infinity());
          Vector hi = Vector::Constant(s.dim,
                                       std::numeric_limits<double>::infinity());
          for (const auto& c : s.components) {
            if (const auto* b = std::get_if<Box>(&c)) {
              lo = lo.cwiseMax(b->lo);
              hi = hi.cwiseMin(b->hi);
            }
          }
          if (!lo.allFinite() || !hi.allFinite()) {
            throw ConfigError("polytope has no box component to bound it");
          }
          return Box{lo, hi};
        }
      },
      set.variant());
}

// Upper bound on max ‖v‖ over the set (norm of the farthest bounding-box
// corner).
inline double radius_bound(const ConvexSet& set) {
  if (const auto* b = std::get_if<Ball>(&set.variant())) {
    return b->center.norm() + b->radius;
  }
  const Box bb = bounding_box(set);
  return bb.lo.cwiseAbs().cwiseMax(bb.hi.cwiseAbs()).norm();
}

}  // namespace cmm
