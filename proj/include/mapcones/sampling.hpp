#pragma once

// Seeded generators for matrices used by solvers, harnesses and tests.
// All randomness flows through an explicit std::mt19937_64; there is no
// global state.

#include "mapcones/matrix.hpp"

#include <random>

namespace mapcones {

using Rng = std::mt19937_64;

/// splitmix64 step, used to derive independent per-restart seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline Matrix random_ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = cxd(g(rng), g(rng));
  return m;
}

inline Vector random_unit_vector(int dim, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cxd(g(rng), g(rng));
  return v / v.norm();
}

/// GUE-style Hermitian matrix, entries O(1).
inline Matrix random_hermitian(int dim, Rng& rng) {
  return hermitize(random_ginibre(dim, dim, rng));
}

/// Wishart PSD matrix G G^dagger, normalized to unit trace.
inline Matrix random_density(int dim, Rng& rng) {
  Matrix g = random_ginibre(dim, dim, rng);
  Matrix w = g * g.adjoint();
  return w / w.trace().real();
}

inline Matrix haar_unitary(int dim, Rng& rng) {
  Matrix g = random_ginibre(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    cxd d = r(i, i);
    q.col(i) *= (d == cxd(0) ? cxd(1) : d / std::abs(d));
  }
  return q;
}

/// Random separable (unnormalized) state: conic combination of product
/// rank-one projectors.
inline BipartiteMatrix random_separable(int dA, int dB, int terms, Rng& rng) {
  std::uniform_real_distribution<double> u(0.2, 1.0);
  Matrix acc = Matrix::Zero(dA * dB, dA * dB);
  for (int t = 0; t < terms; ++t) {
    Vector x = random_unit_vector(dA, rng);
    Vector y = random_unit_vector(dB, rng);
    Matrix px = x * x.adjoint();
    Matrix py = y * y.adjoint();
    acc += u(rng) * kron(px, py);
  }
  return BipartiteMatrix(dA, dB, acc);
}

}  // namespace mapcones
