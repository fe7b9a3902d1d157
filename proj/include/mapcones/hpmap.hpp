#pragma once

// Choi-matrix calculus for Hermitian-preserving linear maps M_A -> M_B.
//
// A map phi is stored canonically by its Choi matrix
//   C_phi = sum_ij e_ij (x) phi(e_ij)  in  M_A (x) M_B,
// self-adjoint iff phi is Hermitian-preserving.  Under the transpose-based
// pairing the defining identity reads <a (x) b, C_phi> = <b, phi(a)>, which
// makes phi(a) = sum_ij a_ij * Block_ij(C_phi) the correct contraction.

#include "mapcones/matrix.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace mapcones {

class HPMap {
 public:
  /// Wraps a Choi matrix.  Rejects inputs whose self-adjointness deviation
  /// exceeds tolerance; smaller deviations are symmetrized away.
  explicit HPMap(BipartiteMatrix choi, double tol = kHermTol) : choi_(std::move(choi)) {
    double dev = herm_deviation(choi_.mat());
    if (dev > tol * (1.0 + max_abs(choi_.mat())) * 1e3)
      throw std::invalid_argument("HPMap: Choi matrix is not self-adjoint");
    choi_.mat() = hermitize(choi_.mat());
  }

  int dimA() const { return choi_.dimA(); }
  int dimB() const { return choi_.dimB(); }
  const BipartiteMatrix& choi() const { return choi_; }

 private:
  BipartiteMatrix choi_;
};

inline HPMap from_choi(const BipartiteMatrix& c) { return HPMap(c); }

inline HPMap from_choi(int dA, int dB, const Matrix& m) {
  return HPMap(BipartiteMatrix(dA, dB, m));
}

/// Choi matrix of Ad_V : x -> V* x V for V of shape dA x dB.  It is the
/// rank-one projector onto conj(vec(V)) under the A-major vectorization.
inline BipartiteMatrix choi_of_ad(const Matrix& v) {
  const int dA = static_cast<int>(v.rows());
  const int dB = static_cast<int>(v.cols());
  Vector eta = vectorize(v).conjugate();
  return BipartiteMatrix(dA, dB, eta * eta.adjoint());
}

/// Signed sum of Ad_V Choi matrices.  Empty signs means all +1.
inline HPMap from_kraus(const std::vector<Matrix>& kraus, const std::vector<int>& signs = {}) {
  if (kraus.empty()) throw std::invalid_argument("from_kraus: empty Kraus list");
  if (!signs.empty() && signs.size() != kraus.size())
    throw std::invalid_argument("from_kraus: signs length mismatch");
  const int dA = static_cast<int>(kraus[0].rows());
  const int dB = static_cast<int>(kraus[0].cols());
  Matrix acc = Matrix::Zero(dA * dB, dA * dB);
  for (std::size_t t = 0; t < kraus.size(); ++t) {
    if (kraus[t].rows() != dA || kraus[t].cols() != dB)
      throw DimensionError("from_kraus: inconsistent Kraus shapes");
    double s = signs.empty() ? 1.0 : static_cast<double>(signs[t]);
    acc += s * choi_of_ad(kraus[t]).mat();
  }
  return from_choi(dA, dB, acc);
}

/// Assembles C = sum_ij e_ij (x) images[i*dA+j].  Requires the images to be
/// Hermitian-consistent (image(j,i) = image(i,j)^*) within tolerance.
inline HPMap from_images(const std::vector<Matrix>& images, int dA) {
  if (static_cast<int>(images.size()) != dA * dA)
    throw DimensionError("from_images: need dimA^2 blocks");
  const int dB = static_cast<int>(images[0].rows());
  BipartiteMatrix c = BipartiteMatrix::zero(dA, dB);
  for (int i = 0; i < dA; ++i)
    for (int j = 0; j < dA; ++j) {
      if (images[i * dA + j].rows() != dB || images[i * dA + j].cols() != dB)
        throw DimensionError("from_images: inconsistent block shapes");
      c.set_block(i, j, images[i * dA + j]);
    }
  return HPMap(c);  // self-adjointness check lives in the constructor
}

/// phi(a) = sum_ij a_ij Block_ij(C_phi); defined for arbitrary (not just
/// Hermitian) inputs, linear in a.
inline Matrix apply(const HPMap& phi, const Matrix& a) {
  if (a.rows() != phi.dimA() || a.cols() != phi.dimA())
    throw DimensionError("apply: input dimension mismatch");
  const int dB = phi.dimB();
  Matrix out = Matrix::Zero(dB, dB);
  for (int i = 0; i < phi.dimA(); ++i)
    for (int j = 0; j < phi.dimA(); ++j) out += a(i, j) * phi.choi().block(i, j);
  return out;
}

inline HermitianMatrix apply(const HPMap& phi, const HermitianMatrix& a) {
  return HermitianMatrix(mapcones::apply(phi, a.mat()));
}

/// Adjoint with respect to the bilinear pairing: <phi(a),b> = <a,phi*(b)>.
/// Its Choi matrix is the factor flip of C_phi.
inline HPMap adjoint(const HPMap& phi) { return HPMap(flip(phi.choi())); }

/// C_{psi o phi} = (1_A (x) psi)(C_phi): apply psi block-wise on B.
inline HPMap compose(const HPMap& psi, const HPMap& phi) {
  if (phi.dimB() != psi.dimA())
    throw DimensionError("compose: inner dimensions do not match");
  const int dA = phi.dimA(), dC = psi.dimB();
  BipartiteMatrix c = BipartiteMatrix::zero(dA, dC);
  for (int i = 0; i < dA; ++i)
    for (int j = 0; j < dA; ++j) c.set_block(i, j, mapcones::apply(psi, Matrix(phi.choi().block(i, j))));
  return HPMap(std::move(c));
}

/// Composition via the block Schur summation C_{psi o phi} =
/// sum_kl phi*(e_kl) (x) psi(e_kl).  Verification route for compose().
inline HPMap compose_schur(const HPMap& psi, const HPMap& phi) {
  if (phi.dimB() != psi.dimA())
    throw DimensionError("compose_schur: inner dimensions do not match");
  const int dA = phi.dimA(), dB = phi.dimB(), dC = psi.dimB();
  BipartiteMatrix cstar = flip(phi.choi());  // C_{phi*} in M_B (x) M_A
  Matrix acc = Matrix::Zero(dA * dC, dA * dC);
  for (int k = 0; k < dB; ++k)
    for (int l = 0; l < dB; ++l)
      acc += kron(Matrix(cstar.block(k, l)), Matrix(psi.choi().block(k, l)));
  return from_choi(dA, dC, acc);
}

/// phi o t (transpose precomposition); Choi is the A-side partial transpose
/// of C_phi, which for Hermitian Choi equals the conjugate of the B-side one.
inline HPMap compose_transpose(const HPMap& phi) {
  const int dA = phi.dimA(), dB = phi.dimB();
  BipartiteMatrix c = BipartiteMatrix::zero(dA, dB);
  for (int i = 0; i < dA; ++i)
    for (int j = 0; j < dA; ++j) c.set_block(i, j, phi.choi().block(j, i));
  return HPMap(std::move(c));
}

/// <phi,psi> = <C_phi, C_psi>.
inline double map_pairing(const HPMap& phi, const HPMap& psi) {
  if (phi.dimA() != psi.dimA() || phi.dimB() != psi.dimB())
    throw DimensionError("map_pairing: dimension mismatch");
  return pairing(phi.choi(), psi.choi());
}

/// (1_d (x) phi)(X) for X in M_d (x) M_A: apply phi on every d-indexed block.
inline BipartiteMatrix ampliate_left(const HPMap& phi, int d, const BipartiteMatrix& x) {
  if (x.dimA() != d || x.dimB() != phi.dimA())
    throw DimensionError("ampliate_left: X must be shaped (d, dimA)");
  BipartiteMatrix out = BipartiteMatrix::zero(d, phi.dimB());
  for (int u = 0; u < d; ++u)
    for (int v = 0; v < d; ++v) out.set_block(u, v, mapcones::apply(phi, Matrix(x.block(u, v))));
  return out;
}

/// (phi (x) 1_d)(X) for X in M_A (x) M_d.
inline BipartiteMatrix ampliate_right(const HPMap& phi, int d, const BipartiteMatrix& x) {
  if (x.dimA() != phi.dimA() || x.dimB() != d)
    throw DimensionError("ampliate_right: X must be shaped (dimA, d)");
  const int dA = phi.dimA(), dB = phi.dimB();
  Matrix acc = Matrix::Zero(dB * d, dB * d);
  for (int i = 0; i < dA; ++i)
    for (int j = 0; j < dA; ++j)
      acc += kron(Matrix(phi.choi().block(i, j)), Matrix(x.block(i, j)));
  return BipartiteMatrix(dB, d, acc);
}

// ---------------------------------------------------------------------------
// Named maps.

inline HPMap identity_map(int d) {
  Matrix acc = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) acc += kron(matrix_unit(i, j, d), matrix_unit(i, j, d));
  return from_choi(d, d, acc);
}

inline HPMap transpose_map(int d) {
  Matrix acc = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) acc += kron(matrix_unit(i, j, d), matrix_unit(j, i, d));
  return from_choi(d, d, acc);
}

/// sigma = 1_{M_2} + Ad_{e21} on M_2.
inline HPMap sigma_map() {
  return from_kraus({Matrix::Identity(2, 2), matrix_unit(1, 0, 2)});
}

/// tau on M_2: Choi has the middle 2x2 all-ones block plus a corner 1.
inline HPMap tau_map() {
  Matrix c = Matrix::Zero(4, 4);
  c(1, 1) = c(1, 2) = c(2, 1) = c(2, 2) = 1.0;
  c(3, 3) = 1.0;
  return from_choi(2, 2, c);
}

/// Family on M_2 with Choi diag(a,b,c,d) and -1 corner entries; positive as
/// a map iff sqrt(ad) + sqrt(bc) >= 1.
inline HPMap phi_abcd(double a, double b, double c, double d) {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  m(3, 3) = d;
  m(0, 3) = m(3, 0) = -1.0;
  return from_choi(2, 2, m);
}

inline HPMap phi_uniform(double a) { return phi_abcd(a, a, a, a); }

/// x -> diag-scaling map: multiplies x11 by alpha, x22 by 1/alpha.
inline HPMap phi_alpha(double alpha) {
  if (alpha <= 0) throw std::invalid_argument("phi_alpha: alpha must be positive");
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = alpha;
  m(3, 3) = 1.0 / alpha;
  m(0, 3) = m(3, 0) = 1.0;
  return from_choi(2, 2, m);
}

}  // namespace mapcones
