#pragma once

// Grid-search value oracle for tiny instances (box sets, n + m <= 4): the
// four coupled minimax/maximin problems, the three Lagrangian duals, the
// inner primal/dual solution sets at a fixed x, and the relation table
// between the four problem values.

#include "cmm/zoo.hpp"

#include <array>
#include <iomanip>
#include <sstream>

namespace cmm {

struct GridSpec {
  int points_per_dim = 201;
  double equality_tolerance = 0.0;  // 0 selects ½ × spacing × ‖row‖₁
  double argmax_tolerance = 1e-9;
  // Outer-coupled feasibility: false = at least one inner solution must
  // satisfy the coupling, true = every inner solution must.
  bool all_solutions = false;

  void validate() const {
    if (points_per_dim < 11) throw ConfigError("points_per_dim must be >= 11");
    if (equality_tolerance < 0.0 || !(argmax_tolerance > 0.0)) {
      throw ConfigError("grid tolerances must be positive");
    }
  }
};

namespace detail {

struct Grid {
  std::vector<Vector> points;
  double spacing = 0.0;  // largest 1-D spacing
  double diameter = 0.0;  // cell diameter
};

inline Grid box_grid(const Vector& lo, const Vector& hi, int ppd) {
  const Eigen::Index d = lo.size();
  std::vector<std::vector<double>> axes(static_cast<std::size_t>(d));
  Grid g;
  double diam2 = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    auto& ax = axes[static_cast<std::size_t>(i)];
    if (!std::isfinite(lo[i]) || !std::isfinite(hi[i])) {
      throw NotApplicableError("grid oracle needs bounded boxes");
    }
    if (hi[i] - lo[i] <= 0.0) {
      ax.push_back(lo[i]);
      continue;
    }
    const double h = (hi[i] - lo[i]) / (ppd - 1);
    for (int j = 0; j < ppd; ++j) ax.push_back(j + 1 == ppd ? hi[i] : lo[i] + j * h);
    g.spacing = std::max(g.spacing, h);
    diam2 += h * h;
  }
  g.diameter = std::sqrt(diam2);
  std::size_t total = 1;
  for (const auto& ax : axes) total *= ax.size();
  g.points.reserve(total);
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  for (std::size_t t = 0; t < total; ++t) {
    Vector p(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      p[i] = axes[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
    }
    g.points.push_back(std::move(p));
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (++idx[i] < axes[i].size()) break;
      idx[i] = 0;
    }
  }
  return g;
}

inline Grid set_grid(const ConvexSet& set, int ppd) {
  const auto* b = std::get_if<Box>(&set.variant());
  if (!b) throw NotApplicableError("grid oracle needs box sets");
  return box_grid(b->lo, b->hi, ppd);
}

// Values of f and coupling residuals on the product grid X × Y.
struct Table {
  Grid gx;
  Grid gy;
  std::vector<double> f;    // f[ix * ny + iy]
  std::vector<double> res;  // res[(ix * ny + iy) * k + i]
  std::vector<double> tol;  // per-row acceptance tolerance
  Eigen::Index k = 0;

  std::size_t nx() const { return gx.points.size(); }
  std::size_t ny() const { return gy.points.size(); }
  double fv(std::size_t ix, std::size_t iy) const { return f[ix * ny() + iy]; }
  const double* r(std::size_t ix, std::size_t iy) const {
    return res.data() + (ix * ny() + iy) * static_cast<std::size_t>(k);
  }
  bool feasible(std::size_t ix, std::size_t iy) const {
    const double* rr = r(ix, iy);
    for (Eigen::Index i = 0; i < k; ++i) {
      if (rr[i] > tol[static_cast<std::size_t>(i)]) return false;
    }
    return true;
  }
};

// Rows i, j with (A_j, B_j, c_j) = −(A_i, B_i, c_i) encode an equality.
inline std::vector<bool> paired_rows(const CouplingConstraints& cp) {
  const Eigen::Index k = cp.k();
  std::vector<bool> paired(static_cast<std::size_t>(k), false);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      if (i == j) continue;
      if (cp.A.row(i) == -cp.A.row(j) && cp.B.row(i) == -cp.B.row(j) &&
          cp.c[i] == -cp.c[j]) {
        paired[static_cast<std::size_t>(i)] = true;
      }
    }
  }
  return paired;
}

inline Table make_table(const ProblemInstance& inst, const GridSpec& grid) {
  grid.validate();
  if (inst.n() + inst.m() > 4) throw NotApplicableError("grid oracle needs n + m <= 4");
  Table t;
  t.gx = set_grid(inst.set_x, grid.points_per_dim);
  t.gy = set_grid(inst.set_y, grid.points_per_dim);
  const auto& cp = inst.coupling;
  t.k = inst.k();
  const auto paired = paired_rows(cp);
  const double spacing = std::max(t.gx.spacing, t.gy.spacing);
  for (Eigen::Index i = 0; i < t.k; ++i) {
    // Stepping the free variable one grid cell moves the residual by at most
    // spacing·‖row‖₁, so half of that always leaves a grid point in the band.
    const double row_norm =
        std::max(cp.A.row(i).lpNorm<1>(), cp.B.row(i).lpNorm<1>());
    if (paired[static_cast<std::size_t>(i)]) {
      t.tol.push_back(grid.equality_tolerance > 0.0
                          ? grid.equality_tolerance
                          : 0.5 * spacing * row_norm + 1e-12 * (1.0 + std::abs(cp.c[i])));
    } else {
      t.tol.push_back(1e-12 * (1.0 + std::abs(cp.c[i])));
    }
  }
  t.f.resize(t.nx() * t.ny());
  t.res.resize(t.nx() * t.ny() * static_cast<std::size_t>(t.k));
  for (std::size_t ix = 0; ix < t.nx(); ++ix) {
    const Vector ax = cp.A * t.gx.points[ix] - cp.c;
    for (std::size_t iy = 0; iy < t.ny(); ++iy) {
      const auto& y = t.gy.points[iy];
      t.f[ix * t.ny() + iy] = inst.objective.eval(t.gx.points[ix], y);
      const Vector rr = ax + cp.B * y;
      for (Eigen::Index i = 0; i < t.k; ++i) {
        t.res[(ix * t.ny() + iy) * static_cast<std::size_t>(t.k) + static_cast<std::size_t>(i)] = rr[i];
      }
    }
  }
  return t;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace detail

// Cell diameter of the X × Y grid times the largest sampled ‖∇f‖.
inline double grid_tolerance(const ProblemInstance& inst, const GridSpec& grid) {
  const auto gx = detail::set_grid(inst.set_x, grid.points_per_dim);
  const auto gy = detail::set_grid(inst.set_y, grid.points_per_dim);
  const double diam = std::hypot(gx.diameter, gy.diameter);
  double lip = 0.0;
  const std::size_t sx = std::max<std::size_t>(1, gx.points.size() / 25);
  const std::size_t sy = std::max<std::size_t>(1, gy.points.size() / 25);
  for (std::size_t i = 0; i < gx.points.size(); i += sx) {
    for (std::size_t j = 0; j < gy.points.size(); j += sy) {
      const auto& x = gx.points[i];
      const auto& y = gy.points[j];
      lip = std::max(lip, std::hypot(inst.objective.grad_x(x, y).norm(),
                                     inst.objective.grad_y(x, y).norm()));
    }
  }
  return diam * lip;
}

// min_x max_{y : Ax + By <= c} f; an empty inner set counts as −∞.
inline double value_mMI(const ProblemInstance& inst, const GridSpec& grid) {
  const auto t = detail::make_table(inst, grid);
  double best = detail::kInf;
  bool any = false;
  for (std::size_t ix = 0; ix < t.nx(); ++ix) {
    double phi = -detail::kInf;
    for (std::size_t iy = 0; iy < t.ny(); ++iy) {
      if (t.feasible(ix, iy)) phi = std::max(phi, t.fv(ix, iy));
    }
    any = any || phi > -detail::kInf;
    best = std::min(best, phi);
  }
  if (!any) throw InfeasibleError("value_mMI: coupling infeasible on the whole grid", 0.0);
  return best;
}

// max_y min_{x : Ax + By <= c} f; an empty inner set counts as +∞.
inline double value_MmI(const ProblemInstance& inst, const GridSpec& grid) {
  const auto t = detail::make_table(inst, grid);
  double best = -detail::kInf;
  bool any = false;
  for (std::size_t iy = 0; iy < t.ny(); ++iy) {
    double psi = detail::kInf;
    for (std::size_t ix = 0; ix < t.nx(); ++ix) {
      if (t.feasible(ix, iy)) psi = std::min(psi, t.fv(ix, iy));
    }
    any = any || psi < detail::kInf;
    best = std::max(best, psi);
  }
  if (!any) throw InfeasibleError("value_MmI: coupling infeasible on the whole grid", 0.0);
  return best;
}

// min over x with Ax + By*(x) <= c of max_y f, y*(x) ranging over the grid
// argmax set.
inline double value_mMO(const ProblemInstance& inst, const GridSpec& grid) {
  const auto t = detail::make_table(inst, grid);
  double best = detail::kInf;
  for (std::size_t ix = 0; ix < t.nx(); ++ix) {
    double fmax = -detail::kInf;
    for (std::size_t iy = 0; iy < t.ny(); ++iy) fmax = std::max(fmax, t.fv(ix, iy));
    const double cut = fmax - grid.argmax_tolerance * std::max(1.0, std::abs(fmax));
    bool any = false;
    bool all = true;
    for (std::size_t iy = 0; iy < t.ny(); ++iy) {
      if (t.fv(ix, iy) < cut) continue;
      const bool ok = t.feasible(ix, iy);
      any = any || ok;
      all = all && ok;
    }
    if (grid.all_solutions ? all : any) best = std::min(best, fmax);
  }
  if (best == detail::kInf) throw InfeasibleError("value_mMO: outer feasible set empty", 0.0);
  return best;
}

inline double value_MmO(const ProblemInstance& inst, const GridSpec& grid) {
  const auto t = detail::make_table(inst, grid);
  double best = -detail::kInf;
  for (std::size_t iy = 0; iy < t.ny(); ++iy) {
    double fmin = detail::kInf;
    for (std::size_t ix = 0; ix < t.nx(); ++ix) fmin = std::min(fmin, t.fv(ix, iy));
    const double cut = fmin + grid.argmax_tolerance * std::max(1.0, std::abs(fmin));
    bool any = false;
    bool all = true;
    for (std::size_t ix = 0; ix < t.nx(); ++ix) {
      if (t.fv(ix, iy) > cut) continue;
      const bool ok = t.feasible(ix, iy);
      any = any || ok;
      all = all && ok;
    }
    if (grid.all_solutions ? all : any) best = std::max(best, fmin);
  }
  if (best == -detail::kInf) throw InfeasibleError("value_MmO: outer feasible set empty", 0.0);
  return best;
}

struct DualValues {
  double v_D1 = 0.0;
  double v_D2 = 0.0;
  double v_D3 = 0.0;
};

// The three duals on a product grid X × Y × [0, λ_max]^k. Each is evaluated
// with its own loop order.
inline DualValues value_duals(const ProblemInstance& inst, const GridSpec& grid,
                              double lambda_max, int lambda_points) {
  if (inst.k() > 2) throw NotApplicableError("dual grid needs k <= 2");
  if (!(lambda_max > 0.0) || lambda_points < 2) {
    throw ConfigError("dual grid needs lambda_max > 0 and >= 2 points");
  }
  const auto t = detail::make_table(inst, grid);
  const auto gl = detail::box_grid(Vector::Zero(inst.k()),
                                   Vector::Constant(inst.k(), lambda_max), lambda_points);
  const std::size_t nl = gl.points.size();
  const auto k = static_cast<std::size_t>(t.k);
  // M[ix][il] = max_y L(x, y, λ)
  std::vector<double> M(t.nx() * nl);
  for (std::size_t ix = 0; ix < t.nx(); ++ix) {
    for (std::size_t il = 0; il < nl; ++il) {
      const auto& lam = gl.points[il];
      double mx = -detail::kInf;
      for (std::size_t iy = 0; iy < t.ny(); ++iy) {
        const double* rr = t.r(ix, iy);
        double pen = 0.0;
        for (std::size_t i = 0; i < k; ++i) pen += lam[static_cast<Eigen::Index>(i)] * rr[i];
        mx = std::max(mx, t.fv(ix, iy) - pen);
      }
      M[ix * nl + il] = mx;
    }
  }
  DualValues v;
  v.v_D1 = detail::kInf;
  for (std::size_t ix = 0; ix < t.nx(); ++ix) {
    double inner = detail::kInf;
    for (std::size_t il = 0; il < nl; ++il) inner = std::min(inner, M[ix * nl + il]);
    v.v_D1 = std::min(v.v_D1, inner);
  }
  v.v_D2 = detail::kInf;
  for (std::size_t il = 0; il < nl; ++il) {
    double G = detail::kInf;
    for (std::size_t ix = 0; ix < t.nx(); ++ix) G = std::min(G, M[ix * nl + il]);
    v.v_D2 = std::min(v.v_D2, G);
  }
  v.v_D3 = *std::min_element(M.begin(), M.end());
  if (std::abs(v.v_D1 - v.v_D2) > 1e-12 || std::abs(v.v_D1 - v.v_D3) > 1e-12) {
    throw Error("dual grid values disagree");
  }
  return v;
}

// Lipschitz-based tolerance for the dual grid: the X × Y tolerance plus the
// λ cell size times the largest coupling residual.
inline double dual_grid_tolerance(const ProblemInstance& inst, const GridSpec& grid,
                                  double lambda_max, int lambda_points) {
  const auto t = detail::make_table(inst, grid);
  double rmax = 0.0;
  for (double r : t.res) rmax = std::max(rmax, std::abs(r));
  const double hl = lambda_max / (lambda_points - 1);
  return grid_tolerance(inst, grid) +
         std::sqrt(static_cast<double>(inst.k())) * hl * rmax;
}

// Solution sets of the inner primal (A) max_y min_λ L and dual (B)
// min_λ max_y L at a fixed x, as (y, λ) pairs on the grid.
struct InnerSolutionSets {
  std::vector<std::pair<Vector, Vector>> primal;
  std::vector<std::pair<Vector, Vector>> dual;
  std::size_t lambda_grid_size = 0;
};

inline InnerSolutionSets inner_solution_sets(const ProblemInstance& inst, const Vector& x,
                                             const GridSpec& grid, double lambda_max,
                                             int lambda_points) {
  const auto gy = detail::set_grid(inst.set_y, grid.points_per_dim);
  const auto gl = detail::box_grid(Vector::Zero(inst.k()),
                                   Vector::Constant(inst.k(), lambda_max), lambda_points);
  const std::size_t ny = gy.points.size();
  const std::size_t nl = gl.points.size();
  std::vector<double> L(ny * nl);
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t il = 0; il < nl; ++il) {
      L[iy * nl + il] = lagrangian_eval(inst, x, gy.points[iy], gl.points[il]);
    }
  }
  auto tol_of = [&](double v) { return grid.argmax_tolerance * std::max(1.0, std::abs(v)); };
  InnerSolutionSets out;
  out.lambda_grid_size = nl;
  // (A): y maximizes p(y) = min_λ L; λ minimizes L(y, ·).
  std::vector<double> p(ny, detail::kInf);
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t il = 0; il < nl; ++il) p[iy] = std::min(p[iy], L[iy * nl + il]);
  }
  const double pstar = *std::max_element(p.begin(), p.end());
  for (std::size_t iy = 0; iy < ny; ++iy) {
    if (p[iy] < pstar - tol_of(pstar)) continue;
    for (std::size_t il = 0; il < nl; ++il) {
      if (L[iy * nl + il] <= p[iy] + tol_of(p[iy])) {
        out.primal.emplace_back(gy.points[iy], gl.points[il]);
      }
    }
  }
  // (B): λ minimizes d(λ) = max_y L; y maximizes L(·, λ).
  std::vector<double> d(nl, -detail::kInf);
  for (std::size_t il = 0; il < nl; ++il) {
    for (std::size_t iy = 0; iy < ny; ++iy) d[il] = std::max(d[il], L[iy * nl + il]);
  }
  const double dstar = *std::min_element(d.begin(), d.end());
  for (std::size_t il = 0; il < nl; ++il) {
    if (d[il] > dstar + tol_of(dstar)) continue;
    for (std::size_t iy = 0; iy < ny; ++iy) {
      if (L[iy * nl + il] >= d[il] - tol_of(d[il])) {
        out.dual.emplace_back(gy.points[iy], gl.points[il]);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Relation table.

enum class Problem { mMI = 0, MmI = 1, mMO = 2, MmO = 3 };

inline const char* to_string(Problem p) {
  static constexpr const char* names[] = {"mM-I", "Mm-I", "mM-O", "Mm-O"};
  return names[static_cast<int>(p)];
}

struct InstanceValues {
  std::string name;
  std::array<double, 4> v{};
  double tol = 0.0;
};

struct PairRelation {
  Problem a;
  Problem b;
  // Universal relation a <= b (or a >= b when ge is set); empty for pairs
  // with no definite relation.
  bool universal = false;
  bool ge = false;
  bool realized_lt = false;
  bool realized_eq = false;
  bool realized_gt = false;
  std::vector<std::string> violations;
};

struct RelationsReport {
  std::vector<InstanceValues> values;
  std::vector<PairRelation> pairs;

  bool ok() const {
    for (const auto& p : pairs) {
      if (!p.violations.empty()) return false;
      if (!p.universal && !(p.realized_lt && p.realized_eq && p.realized_gt)) return false;
    }
    return true;
  }
  std::string table() const;
};

inline InstanceValues all_values(const ProblemInstance& inst, const GridSpec& grid,
                                 std::string label = {}) {
  InstanceValues iv;
  iv.name = label.empty() ? inst.name : std::move(label);
  iv.v[0] = value_mMI(inst, grid);
  iv.v[1] = value_MmI(inst, grid);
  iv.v[2] = value_mMO(inst, grid);
  iv.v[3] = value_MmO(inst, grid);
  iv.tol = grid_tolerance(inst, grid);
  return iv;
}

// Interval quadratics with x + y = 1 plus uncoupled instances realizing the
// strict and tied max-min relations, and a slack-coupled instance.
inline std::vector<std::pair<std::string, ProblemInstance>> relations_suite() {
  std::vector<std::pair<std::string, ProblemInstance>> s;
  s.emplace_back("P1 x,y in [0,1]", zoo_instance("prop1-quadratic", {{"x_iv", {0, 1}}, {"y_iv", {0, 1}}}));
  s.emplace_back("P2 x in [-1,1], y in [0,2]",
                 zoo_instance("prop1-quadratic", {{"x_iv", {-1, 1}}, {"y_iv", {0, 2}}}));
  s.emplace_back("P3 x in [1,2], y in [-1,0]",
                 zoo_instance("prop1-quadratic", {{"x_iv", {1, 2}}, {"y_iv", {-1, 0}}}));
  s.emplace_back("gap (x-y)^2 uncoupled",
                 zoo_instance("custom-quadratic", {{"P", {{2.0}}}, {"R", {{-2.0}}}, {"S", {{-2.0}}},
                                                   {"x_lo", {0.0}}, {"x_hi", {1.0}},
                                                   {"y_lo", {0.0}}, {"y_hi", {1.0}},
                                                   {"A", {{0.0}}}, {"B", {{0.0}}}, {"c", {0.0}},
                                                   {"label", "gap-uncoupled"}}));
  s.emplace_back("saddle x^2-y^2 uncoupled",
                 zoo_instance("prop1-quadratic", {{"x_iv", {-1, 1}}, {"y_iv", {-1, 1}}, {"coupled", false}}));
  s.emplace_back("slack x + y <= 5",
                 zoo_instance("custom-quadratic", {{"P", {{2.0}}}, {"R", {{0.0}}}, {"S", {{2.0}}},
                                                   {"A", {{1.0}}}, {"B", {{1.0}}}, {"c", {5.0}},
                                                   {"label", "slack-coupled"}}));
  return s;
}

inline RelationsReport relations_check(
    const std::vector<std::pair<std::string, ProblemInstance>>& suite, const GridSpec& grid) {
  RelationsReport rep;
  for (const auto& [label, inst] : suite) rep.values.push_back(all_values(inst, grid, label));
  using P = Problem;
  rep.pairs = {{P::mMI, P::mMO, true, false}, {P::MmI, P::MmO, true, true},
               {P::mMO, P::MmO, true, true},  {P::mMI, P::MmO, false, false},
               {P::MmI, P::mMO, false, false}, {P::mMI, P::MmI, false, false}};
  for (auto& pr : rep.pairs) {
    for (const auto& iv : rep.values) {
      const double a = iv.v[static_cast<int>(pr.a)];
      const double b = iv.v[static_cast<int>(pr.b)];
      const double tol = 2.0 * iv.tol;
      if (a < b - tol) pr.realized_lt = true;
      else if (a > b + tol) pr.realized_gt = true;
      else pr.realized_eq = true;
      if (pr.universal) {
        const bool bad = pr.ge ? a < b - tol : a > b + tol;
        if (bad) {
          std::ostringstream os;
          os << iv.name << ": v(" << to_string(pr.a) << ") = " << a << ", v("
             << to_string(pr.b) << ") = " << b;
          pr.violations.push_back(os.str());
        }
      }
    }
  }
  return rep;
}

inline std::string RelationsReport::table() const {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4);
  os << std::left << std::setw(28) << "instance";
  for (int p = 0; p < 4; ++p) os << std::right << std::setw(10) << to_string(static_cast<Problem>(p));
  os << std::setw(10) << "tol" << '\n';
  for (const auto& iv : values) {
    os << std::left << std::setw(28) << iv.name;
    for (double v : iv.v) os << std::right << std::setw(10) << v;
    os << std::setw(10) << iv.tol << '\n';
  }
  os << '\n' << std::left << std::setw(18) << "pair" << std::setw(12) << "relation"
     << "realized\n";
  for (const auto& p : pairs) {
    std::string pair = std::string(to_string(p.a)) + " vs " + to_string(p.b);
    std::string rel = p.universal ? (p.ge ? ">= always" : "<= always") : "none";
    std::string real;
    if (p.realized_lt) real += "< ";
    if (p.realized_eq) real += "= ";
    if (p.realized_gt) real += "> ";
    os << std::setw(18) << pair << std::setw(12) << rel << real;
    if (!p.violations.empty()) os << " VIOLATED: " << p.violations.front();
    os << '\n';
  }
  return os.str();
}

}  // namespace cmm
