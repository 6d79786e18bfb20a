#pragma once

// JSON encoding of problem instances and set descriptors. Doubles are written
// in shortest round-trip form, so decode(encode(v)) == v bit for bit;
// non-finite values are written as the strings "inf", "-inf", "nan".

#include "cmm/zoo.hpp"

#include <fstream>
#include <sstream>

namespace cmm {

using Json = nlohmann::json;

namespace detail {

inline Json number_to_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

inline double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ConfigError("expected a number, got " + j.dump());
}

}  // namespace detail

inline Json vector_to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(detail::number_to_json(v[i]));
  return a;
}

inline Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw ConfigError("expected an array, got " + j.dump());
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = detail::number_from_json(j[i]);
  }
  return v;
}

// {"rows": r, "cols": c, "data": [row-major]}
inline Json matrix_to_json(const Matrix& m) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      data.push_back(detail::number_to_json(m(i, j)));
    }
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

inline Matrix matrix_from_json(const Json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw ConfigError("matrix data length does not match rows*cols");
  }
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(i, c) = detail::number_from_json(data[static_cast<std::size_t>(i * cols + c)]);
    }
  }
  return m;
}

inline Json set_to_json(const ConvexSet& set) {
  return std::visit(
      [&](const auto& s) -> Json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          return {{"type", "box"}, {"lo", vector_to_json(s.lo)}, {"hi", vector_to_json(s.hi)}};
        } else if constexpr (std::is_same_v<T, Simplex>) {
          return {{"type", "simplex"},
                  {"budget", detail::number_to_json(s.budget)},
                  {"mode", s.mode == SimplexMode::eq ? "eq" : "le"},
                  {"lo", vector_to_json(s.lo)},
                  {"hi", vector_to_json(s.hi)}};
        } else if constexpr (std::is_same_v<T, NonnegOrthant>) {
          return {{"type", "orthant"}, {"dim", s.dim}};
        } else if constexpr (std::is_same_v<T, Ball>) {
          return {{"type", "ball"},
                  {"center", vector_to_json(s.center)},
                  {"radius", detail::number_to_json(s.radius)}};
        } else {
          Json comps = Json::array();
          for (const auto& c : s.components) {
            std::visit(
                [&](const auto& piece) {
                  using P = std::decay_t<decltype(piece)>;
                  if constexpr (std::is_same_v<P, Box>) {
                    comps.push_back({{"type", "box"},
                                     {"lo", vector_to_json(piece.lo)},
                                     {"hi", vector_to_json(piece.hi)}});
                  } else if constexpr (std::is_same_v<P, AffineEquality>) {
                    comps.push_back({{"type", "affine"},
                                     {"C", matrix_to_json(piece.C())},
                                     {"d", vector_to_json(piece.d())}});
                  } else {
                    comps.push_back({{"type", "halfspace"},
                                     {"a", vector_to_json(piece.a)},
                                     {"b", detail::number_to_json(piece.b)}});
                  }
                },
                c);
          }
          return {{"type", "polytope"}, {"dim", s.dim}, {"components", comps}};
        }
      },
      set.variant());
}

inline ConvexSet set_from_json(const Json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "box") {
    return ConvexSet::box(vector_from_json(j.at("lo")), vector_from_json(j.at("hi")));
  }
  if (type == "simplex") {
    const auto mode = j.at("mode").get<std::string>();
    if (mode != "eq" && mode != "le") throw ConfigError("simplex mode must be eq|le");
    return ConvexSet::simplex(detail::number_from_json(j.at("budget")),
                              mode == "eq" ? SimplexMode::eq : SimplexMode::le,
                              vector_from_json(j.at("lo")),
                              vector_from_json(j.at("hi")));
  }
  if (type == "orthant") return ConvexSet::orthant(j.at("dim").get<Eigen::Index>());
  if (type == "ball") {
    return ConvexSet::ball(vector_from_json(j.at("center")),
                           detail::number_from_json(j.at("radius")));
  }
  if (type == "polytope") {
    std::vector<PolytopeComponent> comps;
    for (const auto& c : j.at("components")) {
      const auto ct = c.at("type").get<std::string>();
      if (ct == "box") {
        comps.emplace_back(Box{vector_from_json(c.at("lo")), vector_from_json(c.at("hi"))});
      } else if (ct == "affine") {
        comps.emplace_back(AffineEquality(matrix_from_json(c.at("C")),
                                          vector_from_json(c.at("d"))));
      } else if (ct == "halfspace") {
        comps.emplace_back(Halfspace{vector_from_json(c.at("a")),
                                     detail::number_from_json(c.at("b"))});
      } else {
        throw ConfigError("unknown polytope component '" + ct + "'");
      }
    }
    return ConvexSet::polytope(j.at("dim").get<Eigen::Index>(), std::move(comps));
  }
  throw ConfigError("unknown set type '" + type + "'");
}

inline Json constants_to_json(const ProblemConstants& c) {
  using detail::number_to_json;
  return {{"mu_x", number_to_json(c.mu_x)},       {"mu_y", number_to_json(c.mu_y)},
          {"L_x", number_to_json(c.L_x)},         {"L_y", number_to_json(c.L_y)},
          {"D", number_to_json(c.D)},             {"f_lower", number_to_json(c.f_lower)},
          {"f_upper", number_to_json(c.f_upper)}, {"estimated", c.estimated}};
}

inline ProblemConstants constants_from_json(const Json& j) {
  using detail::number_from_json;
  ProblemConstants c;
  c.mu_x = number_from_json(j.at("mu_x"));
  c.mu_y = number_from_json(j.at("mu_y"));
  c.L_x = number_from_json(j.at("L_x"));
  c.L_y = number_from_json(j.at("L_y"));
  c.D = number_from_json(j.at("D"));
  c.f_lower = number_from_json(j.at("f_lower"));
  c.f_upper = number_from_json(j.at("f_upper"));
  c.estimated = j.value("estimated", false);
  return c;
}

inline Json instance_to_json(const ProblemInstance& inst) {
  Json j;
  j["name"] = inst.name;
  j["n"] = inst.n();
  j["m"] = inst.m();
  j["k"] = inst.k();
  j["A"] = matrix_to_json(inst.coupling.A);
  j["B"] = matrix_to_json(inst.coupling.B);
  j["c"] = vector_to_json(inst.coupling.c);
  j["set_x"] = set_to_json(inst.set_x);
  j["set_y"] = set_to_json(inst.set_y);
  j["constants"] = constants_to_json(inst.constants);
  if (inst.quadratic) {
    const auto& q = *inst.quadratic;
    j["objective"] = {{"kind", "quadratic"},
                      {"P", matrix_to_json(q.P)},
                      {"R", matrix_to_json(q.R)},
                      {"S", matrix_to_json(q.S)},
                      {"p", vector_to_json(q.p)},
                      {"q", vector_to_json(q.q)},
                      {"r0", detail::number_to_json(q.r0)}};
  } else {
    j["objective"] = {{"kind", "zoo"}, {"source", inst.source}};
  }
  return j;
}

// Sets, coupling and constants always come from the document; the objective
// is either the stored quadratic or rebuilt from the zoo source.
inline ProblemInstance instance_from_json(const Json& j) {
  try {
    ProblemInstance inst;
    const auto& obj = j.at("objective");
    const auto kind = obj.at("kind").get<std::string>();
    if (kind == "quadratic") {
      QuadraticForm q{matrix_from_json(obj.at("P")), matrix_from_json(obj.at("R")),
                      matrix_from_json(obj.at("S")), vector_from_json(obj.at("p")),
                      vector_from_json(obj.at("q")), detail::number_from_json(obj.at("r0"))};
      inst.objective = make_oracle(q);
      inst.quadratic = std::move(q);
    } else if (kind == "zoo") {
      const auto& src = obj.at("source");
      inst = zoo_instance(src.at("name").get<std::string>(),
                          src.value("params", Json::object()));
    } else {
      throw ConfigError("unknown objective kind '" + kind + "'");
    }
    inst.name = j.at("name").get<std::string>();
    inst.set_x = set_from_json(j.at("set_x"));
    inst.set_y = set_from_json(j.at("set_y"));
    inst.coupling = {matrix_from_json(j.at("A")), matrix_from_json(j.at("B")),
                     vector_from_json(j.at("c"))};
    inst.constants = constants_from_json(j.at("constants"));
    if (j.at("n").get<Eigen::Index>() != inst.n() ||
        j.at("m").get<Eigen::Index>() != inst.m() ||
        j.at("k").get<Eigen::Index>() != inst.k()) {
      throw ConfigError("instance n/m/k do not match the stored blocks");
    }
    inst.validate();
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed instance document: ") + e.what());
  } catch (const DimensionError& e) {
    throw ConfigError(std::string("inconsistent instance document: ") + e.what());
  }
}

inline ProblemInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open instance file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("cannot parse '" + path + "': " + e.what());
  }
  return instance_from_json(j);
}

}  // namespace cmm
