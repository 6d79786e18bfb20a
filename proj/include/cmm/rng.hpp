#pragma once

// Splittable counter-based generator. Every draw is a pure function of
// (key, counter), so child streams derived with split() are reproducible
// regardless of the order in which they are consumed.

#include "cmm/core.hpp"

#include <cstdint>
#include <limits>

namespace cmm {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) : key_(mix64(seed)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return mix64(key_ ^ mix64(counter_++)); }

  // Independent child stream; does not advance this generator.
  Rng split(std::uint64_t stream) const {
    Rng child;
    child.key_ = mix64(key_ ^ (0xd1b54a32d192ed03ULL * (stream + 1)));
    return child;
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double exponential() { return -std::log1p(-uniform()); }

  double normal() {
    // Box-Muller; one draw discarded for simplicity.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  Vector uniform_vector(Eigen::Index n, double lo, double hi) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }

  Vector normal_vector(Eigen::Index n) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  Matrix normal_matrix(Eigen::Index r, Eigen::Index c) {
    Matrix m(r, c);
    for (Eigen::Index j = 0; j < c; ++j) {
      for (Eigen::Index i = 0; i < r; ++i) m(i, j) = normal();
    }
    return m;
  }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

// Radical-inverse Halton point (index >= 1) in [0,1)^dim.
inline Vector halton(std::uint64_t index, Eigen::Index dim) {
  static constexpr int primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                   31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
  Vector p(dim);
  for (Eigen::Index d = 0; d < dim; ++d) {
    const int base = primes[d % 20];
    double f = 1.0;
    double r = 0.0;
    std::uint64_t i = index + static_cast<std::uint64_t>(d / 20) * 7919;
    while (i > 0) {
      f /= base;
      r += f * static_cast<double>(i % base);
      i /= base;
    }
    p[d] = r;
  }
  return p;
}

}  // namespace cmm
