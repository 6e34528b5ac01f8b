#pragma once

// Seeded generators for property tests.

#include <random>

#include "qcft/numerics.hpp"

namespace qcft::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(20240611);
  return engine;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }
inline int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

inline ComplexVector random_vector(Eigen::Index n) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = Complex(g(rng()), g(rng()));
  return v;
}

inline ComplexVector random_unit_vector(Eigen::Index n) {
  ComplexVector v = random_vector(n);
  return v / v.norm();
}

inline DenseMatrix random_hermitian(Eigen::Index n) {
  DenseMatrix a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) a.col(j) = random_vector(n);
  return 0.5 * (a + a.adjoint());
}

/// Random Hermitian banded matrix (cyclic band) in both storages.
inline std::pair<BandedMatrix, DenseMatrix> random_banded(std::size_t n, std::size_t bw) {
  BandedMatrix b(n, bw);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t o = 0; o <= bw; ++o) {
      const std::size_t j = (i + o) % n;
      const Complex v = o == 0 ? Complex(uniform(-1, 1), 0.0) : Complex(uniform(-1, 1), uniform(-1, 1));
      b.add(i, j, v);
      if (o != 0) b.add(j, i, std::conj(v));
    }
  return {b, b.to_dense()};
}

}  // namespace qcft::testing
