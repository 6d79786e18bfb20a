#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace cmm {

inline constexpr const char* kVersion = "0.1.0";

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Error hierarchy. The CLI maps ConfigError to exit code 2 and every other
// Error to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class NotApplicableError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, int iteration)
      : Error(what + " at iteration " + std::to_string(iteration)),
        iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

inline void require_dim(Eigen::Index got, Eigen::Index want, const char* what) {
  if (got != want) {
    throw DimensionError(std::string(what) + ": expected dimension " +
                         std::to_string(want) + ", got " + std::to_string(got));
  }
}

inline void require_nonnegative(const Vector& v, const char* what) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0.0)) {
      throw DomainError(std::string(what) + ": component " + std::to_string(i) +
                        " is negative (" + std::to_string(v[i]) + ")");
    }
  }
}

inline bool all_finite(const Vector& v) { return v.allFinite(); }

// Euclidean projection onto the nonnegative orthant.
inline Vector positive_part(const Vector& v) { return v.cwiseMax(0.0); }

// Spectral norm (largest singular value); zero for empty matrices.
inline double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
}

}  // namespace cmm
