#pragma once

// Adversarial attacks on minimum-cost network flow. The user routes r_t
// units from s to t at cost Σ w_e (x_e + y_e) x_e; the adversary spends a
// budget b on y (0 <= y <= p, Σy = b), which also eats capacity: x + y <= p.
//
// In the minimization form consumed by the solvers the attack u is the outer
// variable and the flow v is the coupled inner one:
//   min_u max_v  ½η‖u‖² − Σ w_e (u_e + v_e) v_e   s.t.  u + v <= p.

#include "cmm/d3_gda.hpp"
#include "cmm/mgd.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <map>
#include <numeric>
#include <ostream>
#include <queue>
#include <thread>
#include <tuple>

namespace cmm {

struct FlowNetwork {
  int nodes = 0;
  std::vector<std::pair<int, int>> edges;
  Vector p;  // capacities
  Vector w;  // cost weights
  int s = 0;
  int t = 1;
  double demand = 1.0;  // r_t

  Eigen::Index num_edges() const { return static_cast<Eigen::Index>(edges.size()); }

  void validate() const {
    if (nodes < 2) throw ConfigError("network needs at least 2 nodes");
    if (s == t || s < 0 || t < 0 || s >= nodes || t >= nodes) {
      throw ConfigError("bad source/sink");
    }
    require_dim(p.size(), num_edges(), "capacities");
    require_dim(w.size(), num_edges(), "weights");
    for (const auto& [i, j] : edges) {
      if (i == j) throw ConfigError("self-loop in network");
      if (i < 0 || j < 0 || i >= nodes || j >= nodes) throw ConfigError("edge endpoint out of range");
    }
    if (num_edges() && (p.minCoeff() <= 0.0 || w.minCoeff() <= 0.0)) {
      throw ConfigError("capacities and weights must be positive");
    }
    if (!(demand > 0.0)) throw ConfigError("demand must be positive");
    double in_t = 0.0;
    double out_s = 0.0;
    for (Eigen::Index e = 0; e < num_edges(); ++e) {
      if (edges[e].second == t) in_t += p[e];
      if (edges[e].first == s) out_s += p[e];
    }
    if (demand > in_t + 1e-12 || demand > out_s + 1e-12) {
      throw InfeasibleError("demand exceeds capacity at source or sink", demand - std::min(in_t, out_s));
    }
  }
};

// Edmonds-Karp max flow from s to t under capacities cap.
inline double max_flow(const FlowNetwork& net, const Vector& cap) {
  const int n = net.nodes;
  Matrix res = Matrix::Zero(n, n);
  for (Eigen::Index e = 0; e < net.num_edges(); ++e) {
    res(net.edges[e].first, net.edges[e].second) += std::max(0.0, cap[e]);
  }
  double total = 0.0;
  for (;;) {
    std::vector<int> prev(n, -1);
    prev[net.s] = net.s;
    std::queue<int> bfs;
    bfs.push(net.s);
    while (!bfs.empty() && prev[net.t] < 0) {
      const int u = bfs.front();
      bfs.pop();
      for (int v = 0; v < n; ++v) {
        if (prev[v] < 0 && res(u, v) > 1e-15) {
          prev[v] = u;
          bfs.push(v);
        }
      }
    }
    if (prev[net.t] < 0) return total;
    double aug = std::numeric_limits<double>::infinity();
    for (int v = net.t; v != net.s; v = prev[v]) aug = std::min(aug, res(prev[v], v));
    for (int v = net.t; v != net.s; v = prev[v]) {
      res(prev[v], v) -= aug;
      res(v, prev[v]) += aug;
    }
    total += aug;
  }
}

// Conservation at internal nodes plus the sink demand row.
inline AffineEquality flow_equalities(const FlowNetwork& net) {
  std::vector<int> row(net.nodes, -1);
  int rows = 0;
  for (int j = 0; j < net.nodes; ++j) {
    if (j != net.s && j != net.t) row[j] = rows++;
  }
  const int demand_row = rows++;
  Matrix C = Matrix::Zero(rows, net.num_edges());
  Vector d = Vector::Zero(rows);
  for (Eigen::Index e = 0; e < net.num_edges(); ++e) {
    const auto [i, j] = net.edges[e];
    if (row[j] >= 0) C(row[j], e) += 1.0;
    if (row[i] >= 0) C(row[i], e) -= 1.0;
    if (j == net.t) C(demand_row, e) = 1.0;
  }
  d[demand_row] = net.demand;
  return AffineEquality(std::move(C), std::move(d));
}

inline ConvexSet flow_polytope(const FlowNetwork& net, const Vector& upper) {
  require_dim(upper.size(), net.num_edges(), "flow upper bound");
  return ConvexSet::polytope(net.num_edges(),
                             {Box{Vector::Zero(net.num_edges()), upper.cwiseMax(0.0)},
                              flow_equalities(net)});
}

inline double total_cost(const FlowNetwork& net, const Vector& x, const Vector& y) {
  return net.w.cwiseProduct(x + y).dot(x);
}

// congested: the attack flow shares each edge's unit cost, Σ w(x + y)x.
// capacity_only: the attack only removes capacity; the user pays Σ w x².
enum class CostModel { congested, capacity_only };

inline const char* to_string(CostModel m) {
  return m == CostModel::congested ? "congested" : "capacity_only";
}

inline CostModel cost_model_from_string(const std::string& s) {
  if (s == "congested") return CostModel::congested;
  if (s == "capacity_only" || s == "capacity-only") return CostModel::capacity_only;
  throw ConfigError("unknown cost model '" + s + "'");
}

struct FlowResult {
  Vector x;
  double cost = 0.0;
  double residual = 0.0;
  int iters = 0;
};

// Projected gradient on Σ w(x + y)x over the residual-capacity polytope.
inline FlowResult min_cost_flow(const FlowNetwork& net, const Vector& y,
                                CostModel model = CostModel::congested,
                                double tolerance = 1e-7, int max_iters = 100000) {
  net.validate();
  require_dim(y.size(), net.num_edges(), "attack");
  if ((y.array() < -1e-12).any() || (y - net.p).maxCoeff() > 1e-9) {
    throw DomainError("attack must satisfy 0 <= y <= p");
  }
  const Vector cap = (net.p - y).cwiseMax(0.0);
  const double mf = max_flow(net, cap);
  if (mf < net.demand * (1.0 - 1e-9)) {
    throw InfeasibleError("attack leaves too little capacity for the demand", net.demand - mf);
  }
  const ConvexSet X = flow_polytope(net, cap);
  const double step = 1.0 / (2.0 * net.w.maxCoeff());
  const Vector shift = model == CostModel::congested ? y : Vector::Zero(y.size());
  auto grad = [&](const Vector& x) -> Vector { return net.w.cwiseProduct(2.0 * x + shift); };
  FlowResult out;
  out.x = project(X, Vector::Zero(net.num_edges()));
  for (out.iters = 0; out.iters < max_iters; ++out.iters) {
    const Vector next = project(X, out.x - step * grad(out.x));
    out.residual = (out.x - next).norm() / step;
    out.x = next;
    if (out.residual <= tolerance) break;
  }
  if (out.residual > tolerance) throw DivergenceError("min_cost_flow did not converge", out.iters);
  out.cost = total_cost(net, out.x, shift);
  return out;
}

inline FlowNetwork generate_network(int n, double p_edge, double d_pct, std::uint64_t seed) {
  if (n < 4) throw ConfigError("generate_network needs n >= 4");
  if (!(p_edge > 0.0 && p_edge <= 1.0)) throw ConfigError("edge probability must be in (0, 1]");
  if (!(d_pct > 0.0)) throw ConfigError("demand percentage must be positive");
  const Rng base(seed);
  for (int attempt = 0; attempt < 100; ++attempt) {
    Rng rng = base.split(attempt);
    FlowNetwork net;
    net.nodes = n;
    net.s = 0;
    net.t = n - 1;
    std::vector<double> p, w;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        // Draw all three numbers per ordered pair so graphs stay comparable.
        const double keep = rng.uniform();
        const double cap = rng.uniform(1.0, 2.0);
        const double weight = rng.uniform(1.0, 2.0);
        if (keep < p_edge) {
          net.edges.emplace_back(i, j);
          p.push_back(cap);
          w.push_back(weight);
        }
      }
    }
    net.p = Eigen::Map<Vector>(p.data(), static_cast<Eigen::Index>(p.size()));
    net.w = Eigen::Map<Vector>(w.data(), static_cast<Eigen::Index>(w.size()));
    double out_s = 0.0;
    for (Eigen::Index e = 0; e < net.num_edges(); ++e) {
      if (net.edges[e].first == net.s) out_s += net.p[e];
    }
    if (out_s <= 0.0) continue;
    net.demand = d_pct / 100.0 * out_s;
    if (max_flow(net, net.p) < net.demand * (1.0 + 1e-9)) continue;
    return net;
  }
  throw InfeasibleError("no feasible network after 100 retries", 0.0);
}

// ---------------------------------------------------------------------------
// Attack problem

inline ConvexSet attack_set(const FlowNetwork& net, double budget) {
  return ConvexSet::simplex(budget, SimplexMode::eq, Vector::Zero(net.num_edges()), net.p);
}

inline ProblemInstance attack_instance(const FlowNetwork& net, double budget, double eta) {
  net.validate();
  if (!(eta > 0.0)) throw ConfigError("attack regularizer eta must be positive");
  if (budget < 0.0 || budget > net.p.sum()) throw ConfigError("budget outside [0, sum p]");
  const Eigen::Index E = net.num_edges();
  QuadraticForm qf;
  qf.P = eta * Matrix::Identity(E, E);
  qf.R = -Matrix(net.w.asDiagonal());
  qf.S = 2.0 * Matrix(net.w.asDiagonal());
  qf.p = Vector::Zero(E);
  qf.q = Vector::Zero(E);

  ProblemInstance inst;
  inst.name = "netflow-attack";
  inst.objective = make_oracle(qf);
  inst.quadratic = std::move(qf);
  inst.set_x = attack_set(net, budget);
  inst.set_y = flow_polytope(net, net.p);
  inst.coupling.A = Matrix::Identity(E, E);
  inst.coupling.B = Matrix::Identity(E, E);
  inst.coupling.c = net.p;
  // Diagonal structure gives the curvature constants exactly.
  auto& c = inst.constants;
  c.mu_x = eta;
  c.mu_y = 2.0 * net.w.minCoeff();
  c.L_x = (net.w.array().square() + eta * eta).sqrt().maxCoeff();
  c.L_y = std::sqrt(5.0) * net.w.maxCoeff();
  c.D = std::max(radius_bound(inst.set_x), radius_bound(inst.set_y));
  const auto b = sampled_bounds(inst, 200);
  c.f_lower = b.f_lower;
  c.f_upper = b.f_upper;
  return inst;
}

// ---------------------------------------------------------------------------
// Attacks and baselines

struct AttackResult {
  Vector y;      // attack
  Vector x_cl;   // clean min-cost flow
  Vector x_att;  // min-cost flow after the attack
  double cost_clean = 0.0;
  double cost_attacked = 0.0;
  double rho = 0.0;
  double budget = 0.0;
  std::string method;
  std::uint64_t seed = 0;
};

inline AttackResult evaluate_attack(const FlowNetwork& net, const Vector& y,
                                    std::string method, double budget,
                                    std::uint64_t seed,
                                    CostModel model = CostModel::congested) {
  AttackResult out;
  out.y = y;
  out.method = std::move(method);
  out.budget = budget;
  out.seed = seed;
  const FlowResult clean = min_cost_flow(net, Vector::Zero(net.num_edges()), model);
  const FlowResult att = min_cost_flow(net, y, model);
  out.x_cl = clean.x;
  out.x_att = att.x;
  out.cost_clean = clean.cost;
  out.cost_attacked = att.cost;
  out.rho = (att.cost - clean.cost) / clean.cost;
  return out;
}

struct AttackConfig {
  double eta = 0.1;
  int T = 100;
  int inner_iters = 5;  // K
  double step = 0.5;    // every gradient step
  int ni_inner = 25;
  int ni_outer = 100;
  CostModel evaluation = CostModel::congested;
};

inline Vector mgd_attack(const FlowNetwork& net, double budget, const AttackConfig& cfg) {
  const ProblemInstance inst = attack_instance(net, budget, cfg.eta);
  MgdConfig m;
  m.alpha = cfg.step;
  m.allow_large_alpha = true;
  m.T = cfg.T;
  m.delta_mode = DeltaMode::fixed_iters;
  m.inner_iters = cfg.inner_iters;
  m.inner.method = InnerMethod::gda_multistep;
  m.inner.step_x = cfg.step;
  m.inner.step_y = cfg.step;
  m.reference = false;
  return mgd_run(inst, m).last().x;
}

inline Vector d3_attack(const FlowNetwork& net, double budget, const AttackConfig& cfg) {
  const ProblemInstance inst = attack_instance(net, budget, cfg.eta);
  D3Config d;
  d.alpha = cfg.step;
  d.beta = cfg.step;
  d.T = cfg.T;
  return d3_gda_run(inst, d).last().x;
}

// Exponential spacings give a uniform point of the simplex; projecting onto
// the capped simplex then enforces y <= p.
inline Vector random_attack(const FlowNetwork& net, double budget, Rng& rng) {
  Vector e(net.num_edges());
  for (Eigen::Index i = 0; i < e.size(); ++i) e[i] = rng.exponential();
  return project(attack_set(net, budget), budget * e / e.sum());
}

namespace detail {

// Pours the budget into edges in the given order, each up to its capacity.
inline Vector pour(const FlowNetwork& net, double budget, const std::vector<Eigen::Index>& order) {
  Vector y = Vector::Zero(net.num_edges());
  double left = budget;
  for (Eigen::Index e : order) {
    if (left <= 0.0) break;
    y[e] = std::min(left, net.p[e]);
    left -= y[e];
  }
  return y;
}

inline std::vector<Eigen::Index> edge_order(const Vector& key, bool descending) {
  std::vector<Eigen::Index> idx(key.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    return descending ? key[a] > key[b] : key[a] < key[b];
  });
  return idx;
}

}  // namespace detail

inline Vector max_capacity_attack(const FlowNetwork& net, double budget) {
  return detail::pour(net, budget, detail::edge_order(net.p, true));
}

inline Vector greedy_attack(const FlowNetwork& net, double budget) {
  return detail::pour(net, budget, detail::edge_order(net.w, false));
}

// Nikaido-Isoda gap with x the flow (minimizer) and y the attack
// (maximizer), f = Σw(x+y)x − ½η‖y‖²: V(x, y) = V₂(x) − V₁(y) >= 0 with
// V₁(y) = min_x f over the flow polytope under capacity p − y and
// V₂(x) = max_y f over the attack set. Both inner problems and the outer
// descent are plain projected gradient steps.
inline Vector ni_attack(const FlowNetwork& net, double budget, const AttackConfig& cfg) {
  const Eigen::Index E = net.num_edges();
  const ConvexSet Yset = attack_set(net, budget);
  const ConvexSet Xset = flow_polytope(net, net.p);
  const double eta = cfg.eta;
  auto fx = [&](const Vector& x, const Vector& y) -> Vector { return net.w.cwiseProduct(2.0 * x + y); };
  auto fy = [&](const Vector& x, const Vector& y) -> Vector { return net.w.cwiseProduct(x) - eta * y; };

  Vector y = project(Yset, Vector::Constant(E, budget / static_cast<double>(E)));
  Vector x = project(flow_polytope(net, net.p - y), Vector::Zero(E));
  Vector x_hat = x;  // V₁ minimizer, warm started
  Vector y_hat = y;  // V₂ maximizer, warm started
  for (int k = 0; k < cfg.ni_outer; ++k) {
    const ConvexSet Xy = flow_polytope(net, net.p - y);
    x_hat = project(Xy, x_hat);
    for (int i = 0; i < cfg.ni_inner; ++i) x_hat = project(Xy, x_hat - cfg.step * fx(x_hat, y));
    for (int i = 0; i < cfg.ni_inner; ++i) y_hat = project(Yset, y_hat + cfg.step * fy(x, y_hat));
    // Danskin: ∇_x V = ∇_x f(x, ŷ), ∇_y V = −∇_y f(x̂, y).
    const Vector gx = fx(x, y_hat);
    const Vector gy = -fy(x_hat, y);
    x = project(Xset, x - cfg.step * gx);
    y = project(Yset, y - cfg.step * gy);
    detail::guard_finite(x, y, k, "ni_attack");
  }
  return y;
}

inline const std::vector<std::string>& attack_methods() {
  static const std::vector<std::string> names = {"mgd", "d3-gda", "random", "max_capacity",
                                                 "greedy", "ni"};
  return names;
}

// rng is consumed only by the random baseline.
inline AttackResult run_attack(const FlowNetwork& net, double budget, const std::string& method,
                               const AttackConfig& cfg, Rng rng, std::uint64_t seed = 0) {
  Vector y;
  if (budget == 0.0) {
    y = Vector::Zero(net.num_edges());
  } else if (method == "mgd") {
    y = mgd_attack(net, budget, cfg);
  } else if (method == "d3-gda") {
    y = d3_attack(net, budget, cfg);
  } else if (method == "random") {
    y = random_attack(net, budget, rng);
  } else if (method == "max_capacity") {
    y = max_capacity_attack(net, budget);
  } else if (method == "greedy") {
    y = greedy_attack(net, budget);
  } else if (method == "ni") {
    y = ni_attack(net, budget, cfg);
  } else {
    throw ConfigError("unknown attack method '" + method + "'");
  }
  return evaluate_attack(net, y, method, budget, seed, cfg.evaluation);
}

// ---------------------------------------------------------------------------
// Multi-seed experiment

struct ExperimentSpec {
  int nodes = 15;
  double edge_prob = 1.0;
  double demand_pct = 20.0;
  std::vector<double> budgets{2.0, 8.0, 14.0};
  std::vector<std::string> methods{"mgd", "random", "max_capacity", "greedy"};
  int trials = 15;
  std::uint64_t seed = 0;
  AttackConfig attack{};
  int threads = 1;

  void validate() const {
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (budgets.empty() || methods.empty()) throw ConfigError("need budgets and methods");
    for (double b : budgets) {
      if (b < 0.0) throw ConfigError("budgets must be >= 0");
    }
    for (const auto& m : methods) {
      const auto& all = attack_methods();
      if (std::find(all.begin(), all.end(), m) == all.end()) {
        throw ConfigError("unknown attack method '" + m + "'");
      }
    }
  }
};

// Network for a trial; shared by every method and budget (paired trials).
inline std::uint64_t trial_seed(std::uint64_t base, int trial) {
  return Rng(base).split(static_cast<std::uint64_t>(trial))();
}

struct TrialOutcome {
  double budget = 0.0;
  std::string method;
  int trial = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  double rho = 0.0;
  std::string error;
};

struct ExperimentRow {
  double budget = 0.0;
  std::string method;
  int trials_ok = 0;
  int trials_failed = 0;
  double rho_mean = std::numeric_limits<double>::quiet_NaN();
  double rho_min = std::numeric_limits<double>::quiet_NaN();
  double rho_max = std::numeric_limits<double>::quiet_NaN();
};

struct ExperimentResult {
  std::vector<TrialOutcome> trials;  // sorted by (budget, method, trial)
  std::vector<ExperimentRow> rows;   // sorted by (budget, method)
};

inline ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  // One job per trial: the network is generated once and reused.
  const std::size_t nb = spec.budgets.size();
  const std::size_t nm = spec.methods.size();
  std::vector<TrialOutcome> out(static_cast<std::size_t>(spec.trials) * nb * nm);
  auto job = [&](int trial) {
    const std::uint64_t seed = trial_seed(spec.seed, trial);
    std::optional<FlowNetwork> net;
    std::string gen_error;
    try {
      net = generate_network(spec.nodes, spec.edge_prob, spec.demand_pct, seed);
    } catch (const Error& e) {
      gen_error = e.what();
    }
    for (std::size_t bi = 0; bi < nb; ++bi) {
      for (std::size_t mi = 0; mi < nm; ++mi) {
        auto& o = out[(static_cast<std::size_t>(trial) * nb + bi) * nm + mi];
        o.budget = spec.budgets[bi];
        o.method = spec.methods[mi];
        o.trial = trial;
        o.seed = seed;
        if (!net) {
          o.error = gen_error;
          continue;
        }
        const Rng rng = Rng(seed).split(1000 + bi);
        try {
          o.rho = run_attack(*net, o.budget, o.method, spec.attack, rng, seed).rho;
          o.ok = std::isfinite(o.rho);
          if (!o.ok) o.error = "non-finite rho";
        } catch (const Error& e) {
          o.error = e.what();
        }
      }
    }
  };
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int t = next++; t < spec.trials; t = next++) job(t);
  };
  const int nthreads = std::min(spec.threads, spec.trials);
  std::vector<std::thread> pool;
  for (int i = 1; i < nthreads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::stable_sort(out.begin(), out.end(), [](const TrialOutcome& a, const TrialOutcome& b) {
    return std::tie(a.budget, a.method, a.trial) < std::tie(b.budget, b.method, b.trial);
  });
  ExperimentResult res;
  std::map<std::pair<double, std::string>, std::vector<const TrialOutcome*>> groups;
  for (const auto& o : out) groups[{o.budget, o.method}].push_back(&o);
  for (const auto& [key, list] : groups) {
    ExperimentRow row;
    row.budget = key.first;
    row.method = key.second;
    double sum = 0.0;
    for (const auto* o : list) {
      if (!o->ok) {
        ++row.trials_failed;
        continue;
      }
      if (row.trials_ok++ == 0) {
        row.rho_min = row.rho_max = o->rho;
      } else {
        row.rho_min = std::min(row.rho_min, o->rho);
        row.rho_max = std::max(row.rho_max, o->rho);
      }
      sum += o->rho;
    }
    if (row.trials_ok) row.rho_mean = sum / row.trials_ok;
    res.rows.push_back(row);
  }
  res.trials = std::move(out);
  return res;
}

inline void write_experiment_csv(const ExperimentResult& res, std::ostream& os) {
  using detail::fmt_double;
  os << "budget,method,trials_ok,trials_failed,rho_mean,rho_min,rho_max\n";
  for (const auto& r : res.rows) {
    os << fmt_double(r.budget) << ',' << r.method << ',' << r.trials_ok << ','
       << r.trials_failed << ',' << fmt_double(r.rho_mean) << ',' << fmt_double(r.rho_min)
       << ',' << fmt_double(r.rho_max) << '\n';
  }
}

inline const ExperimentRow* find_row(const ExperimentResult& res, double budget,
                                     const std::string& method) {
  for (const auto& r : res.rows) {
    if (r.budget == budget && r.method == method) return &r;
  }
  return nullptr;
}

inline ExperimentSpec experiment_from_json(const Json& j, ExperimentSpec spec = {}) {
  try {
    if (j.contains("nodes")) spec.nodes = j.at("nodes").get<int>();
    if (j.contains("edge_prob")) spec.edge_prob = j.at("edge_prob").get<double>();
    if (j.contains("demand_pct")) spec.demand_pct = j.at("demand_pct").get<double>();
    if (j.contains("budgets")) spec.budgets = j.at("budgets").get<std::vector<double>>();
    if (j.contains("methods")) spec.methods = j.at("methods").get<std::vector<std::string>>();
    if (j.contains("trials")) spec.trials = j.at("trials").get<int>();
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("threads")) spec.threads = j.at("threads").get<int>();
    if (j.contains("eta")) spec.attack.eta = j.at("eta").get<double>();
    if (j.contains("T")) spec.attack.T = j.at("T").get<int>();
    if (j.contains("inner_iters")) spec.attack.inner_iters = j.at("inner_iters").get<int>();
    if (j.contains("step")) spec.attack.step = j.at("step").get<double>();
    if (j.contains("cost_model")) {
      spec.attack.evaluation = cost_model_from_string(j.at("cost_model").get<std::string>());
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad experiment config: ") + e.what());
  }
  return spec;
}

}  // namespace cmm
