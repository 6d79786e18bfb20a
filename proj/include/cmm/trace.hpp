#pragma once

// Per-iteration solver record with CSV and JSON writers.

#include "cmm/serialize.hpp"

#include <cstdio>
#include <ostream>
#include <vector>

namespace cmm {

struct TraceRow {
  int r = 0;
  double q_norm = std::numeric_limits<double>::quiet_NaN();
  double d_bound = std::numeric_limits<double>::quiet_NaN();
  double max_violation = 0.0;
  double comp_gap = 0.0;  // max_i |λ_i (Ax + By − c)_i|
  double G_estimate = std::numeric_limits<double>::quiet_NaN();
  double lambda_norm = 0.0;
  double p_xl = std::numeric_limits<double>::quiet_NaN();
  double p_y = std::numeric_limits<double>::quiet_NaN();
  int inner_iters = 0;
  Vector x;
  Vector y;
  Vector lambda;
};

struct SolverTrace {
  std::string solver;  // "mgd" or "d3-gda"
  std::vector<TraceRow> rows;
  Json metadata = Json::object();

  const TraceRow& last() const {
    if (rows.empty()) throw Error("empty trace");
    return rows.back();
  }
  double lambda_sup() const {
    double b = 0.0;
    for (const auto& row : rows) b = std::max(b, row.lambda_norm);
    return b;
  }
};

inline void fill_constraint_stats(const ProblemInstance& inst, TraceRow& row) {
  const Vector res = inst.coupling.residual(row.x, row.y);
  row.max_violation = res.size() ? std::max(0.0, res.maxCoeff()) : 0.0;
  row.comp_gap = res.size() ? row.lambda.cwiseProduct(res).cwiseAbs().maxCoeff() : 0.0;
  row.lambda_norm = row.lambda.norm();
}

namespace detail {

inline std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline void write_trace_csv(const SolverTrace& trace, std::ostream& os) {
  using detail::fmt_double;
  const bool d3 = trace.solver == "d3-gda";
  if (d3) {
    os << "r,P_xl,P_y,max_violation,comp_gap,lambda_norm\n";
  } else {
    os << "r,Q_norm,d_bound,max_violation,comp_gap,G_estimate,lambda_norm\n";
  }
  for (const auto& row : trace.rows) {
    os << row.r << ',';
    if (d3) {
      os << fmt_double(row.p_xl) << ',' << fmt_double(row.p_y) << ',';
    } else {
      os << fmt_double(row.q_norm) << ',' << fmt_double(row.d_bound) << ',';
    }
    os << fmt_double(row.max_violation) << ',' << fmt_double(row.comp_gap) << ',';
    if (!d3) os << fmt_double(row.G_estimate) << ',';
    os << fmt_double(row.lambda_norm) << '\n';
  }
}

inline Json trace_to_json(const SolverTrace& trace) {
  using detail::number_to_json;
  Json rows = Json::array();
  for (const auto& row : trace.rows) {
    rows.push_back({{"r", row.r},
                    {"Q_norm", number_to_json(row.q_norm)},
                    {"d_bound", number_to_json(row.d_bound)},
                    {"P_xl", number_to_json(row.p_xl)},
                    {"P_y", number_to_json(row.p_y)},
                    {"max_violation", number_to_json(row.max_violation)},
                    {"comp_gap", number_to_json(row.comp_gap)},
                    {"G_estimate", number_to_json(row.G_estimate)},
                    {"lambda_norm", number_to_json(row.lambda_norm)},
                    {"inner_iters", row.inner_iters},
                    {"x", vector_to_json(row.x)},
                    {"y", vector_to_json(row.y)},
                    {"lambda", vector_to_json(row.lambda)}});
  }
  return {{"solver", trace.solver}, {"metadata", trace.metadata}, {"rows", rows}};
}

}  // namespace cmm
