#pragma once

// Dense complex-matrix substrate: the transpose-based bilinear pairing,
// tensor products, partial transpose / flip, spectral routines, Schmidt
// decomposition and PSD projection.
//
// Conventions fixed once, used everywhere:
//  * Composite index is A-major: basis vector (i,k) of C^A (x) C^B sits at
//    row i*dimB + k.  kron(a,b)[(i,k),(j,l)] = a(i,j)*b(k,l).
//  * The pairing is <a,b> = Tr(a^T b) = sum_ij a_ij b_ij, bilinear with NO
//    conjugation.  It relates to the Hilbert-Schmidt inner product via
//    <a,b> = <conj(a), b>_HS; on Hermitian pairs it is real.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace mapcones {

using cxd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kHermTol = 1e-9;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct EigenSolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Matrix matrix_unit(int i, int j, int d) {
  Matrix m = Matrix::Zero(d, d);
  m(i, j) = 1.0;
  return m;
}

inline Matrix hermitize(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

inline double max_abs(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline double herm_deviation(const Matrix& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

/// Square complex matrix stored exactly self-adjoint.  Construction
/// symmetrizes (a + a^*)/2 and flags inputs whose deviation exceeded
/// kHermTol relative to the largest entry.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const Matrix& a) {
    if (a.rows() != a.cols())
      throw DimensionError("HermitianMatrix: input is not square");
    corrected_ = herm_deviation(a) > kHermTol * (1.0 + max_abs(a));
    mat_ = hermitize(a);
  }

  static HermitianMatrix zero(int d) { return HermitianMatrix(Matrix::Zero(d, d)); }
  static HermitianMatrix identity(int d) { return HermitianMatrix(Matrix::Identity(d, d)); }

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Matrix& mat() const { return mat_; }
  bool corrected() const { return corrected_; }

 private:
  Matrix mat_;
  bool corrected_ = false;
};

/// Element of M_A (x) M_B with explicit factor dimensions, A-major indexing.
class BipartiteMatrix {
 public:
  BipartiteMatrix(int dimA, int dimB, const Matrix& m) : dimA_(dimA), dimB_(dimB), mat_(m) {
    if (dimA < 1 || dimB < 1) throw DimensionError("BipartiteMatrix: dims must be positive");
    if (m.rows() != dimA * dimB || m.cols() != dimA * dimB)
      throw DimensionError("BipartiteMatrix: shape does not match dimA*dimB");
  }

  static BipartiteMatrix zero(int dA, int dB) {
    return BipartiteMatrix(dA, dB, Matrix::Zero(dA * dB, dA * dB));
  }

  int dimA() const { return dimA_; }
  int dimB() const { return dimB_; }
  int dim() const { return dimA_ * dimB_; }
  const Matrix& mat() const { return mat_; }
  Matrix& mat() { return mat_; }

  /// Block (i,j): the dimB x dimB submatrix at A-indices (i,j).
  Eigen::Block<const Matrix> block(int i, int j) const {
    return mat_.block(i * dimB_, j * dimB_, dimB_, dimB_);
  }
  void set_block(int i, int j, const Matrix& b) {
    mat_.block(i * dimB_, j * dimB_, dimB_, dimB_) = b;
  }

 private:
  int dimA_, dimB_;
  Matrix mat_;
};

/// <a,b> = Tr(a^T b) = sum_ij a_ij b_ij, as a complex number.
inline cxd pairing_raw(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("pairing: dimension mismatch");
  return a.cwiseProduct(b).sum();
}

/// Real pairing for (numerically) Hermitian operands; the imaginary residue
/// of the raw sum is checked against tolerance and discarded.
inline double pairing(const Matrix& a, const Matrix& b) {
  cxd v = pairing_raw(a, b);
  double scale = 1.0 + std::abs(v);
  if (std::abs(v.imag()) > 1e-8 * scale)
    throw std::runtime_error("pairing: non-negligible imaginary part " +
                             std::to_string(v.imag()));
  return v.real();
}

inline double pairing(const HermitianMatrix& a, const HermitianMatrix& b) {
  return pairing(a.mat(), b.mat());
}

inline double pairing(const BipartiteMatrix& x, const BipartiteMatrix& y) {
  if (x.dimA() != y.dimA() || x.dimB() != y.dimB())
    throw DimensionError("pairing: bipartite dimension mismatch");
  return pairing(x.mat(), y.mat());
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline BipartiteMatrix kron(const Matrix& a, const Matrix& b, int dA, int dB) {
  return BipartiteMatrix(dA, dB, kron(a, b));
}

/// Partial transpose on the B factor: out[(i,k),(j,l)] = in[(i,l),(j,k)].
/// An exact involution.
inline BipartiteMatrix partial_transpose(const BipartiteMatrix& x) {
  const int dA = x.dimA(), dB = x.dimB();
  Matrix out(dA * dB, dA * dB);
  for (int i = 0; i < dA; ++i)
    for (int j = 0; j < dA; ++j)
      out.block(i * dB, j * dB, dB, dB) = x.block(i, j).transpose();
  return BipartiteMatrix(dA, dB, out);
}

/// Factor exchange: out[(k,i),(l,j)] = in[(i,k),(j,l)]; output dims swapped.
inline BipartiteMatrix flip(const BipartiteMatrix& x) {
  const int dA = x.dimA(), dB = x.dimB();
  Matrix out(dB * dA, dB * dA);
  for (int i = 0; i < dA; ++i)
    for (int k = 0; k < dB; ++k)
      for (int j = 0; j < dA; ++j)
        for (int l = 0; l < dB; ++l)
          out(k * dA + i, l * dA + j) = x.mat()(i * dB + k, j * dB + l);
  return BipartiteMatrix(dB, dA, out);
}

/// Eigendecomposition of a (numerically) Hermitian matrix.  Solver failure
/// is reported, never returned as garbage.
inline Eigen::SelfAdjointEigenSolver<Matrix> eig_herm(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(a));
  if (es.info() != Eigen::Success)
    throw EigenSolverError("Hermitian eigensolver failed to converge");
  return es;
}

inline double min_eigenvalue(const Matrix& a) { return eig_herm(a).eigenvalues().minCoeff(); }
inline double min_eigenvalue(const HermitianMatrix& a) { return min_eigenvalue(a.mat()); }

struct EigPair {
  double value;
  Vector vector;
};

inline EigPair min_eigenpair(const Matrix& a) {
  auto es = eig_herm(a);
  Eigen::Index idx;
  es.eigenvalues().minCoeff(&idx);
  return {es.eigenvalues()(idx), es.eigenvectors().col(idx)};
}

/// Relative PSD test: min eigenvalue >= -tol * (1 + spectral norm estimate).
inline bool is_psd(const Matrix& a, double tol = 1e-9) {
  auto es = eig_herm(a);
  double lo = es.eigenvalues().minCoeff();
  double scale = 1.0 + es.eigenvalues().cwiseAbs().maxCoeff();
  return lo >= -tol * scale;
}
inline bool is_psd(const HermitianMatrix& a, double tol = 1e-9) { return is_psd(a.mat(), tol); }

/// Nearest PSD matrix in Frobenius distance: eigenvalue clipping at zero.
inline Matrix psd_project(const Matrix& a) {
  auto es = eig_herm(a);
  Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().adjoint();
}
inline HermitianMatrix psd_project(const HermitianMatrix& a) {
  return HermitianMatrix(psd_project(a.mat()));
}

struct SchmidtDecomposition {
  Eigen::VectorXd coefficients;      // non-increasing, nonnegative
  std::vector<Vector> left_vectors;  // orthonormal in C^A
  std::vector<Vector> right_vectors; // orthonormal in C^B

  Vector reconstruct() const {
    const int dA = static_cast<int>(left_vectors[0].size());
    const int dB = static_cast<int>(right_vectors[0].size());
    Vector out = Vector::Zero(dA * dB);
    for (int r = 0; r < coefficients.size(); ++r)
      for (int i = 0; i < dA; ++i)
        out.segment(i * dB, dB) += coefficients(r) * left_vectors[r](i) * right_vectors[r];
    return out;
  }
};

/// A-major matricization: M(i,k) = xi(i*dB+k).
inline Matrix matricize(const Vector& xi, int dA, int dB) {
  if (xi.size() != dA * dB) throw DimensionError("matricize: length != dA*dB");
  Matrix m(dA, dB);
  for (int i = 0; i < dA; ++i) m.row(i) = xi.segment(i * dB, dB).transpose();
  return m;
}

inline Vector vectorize(const Matrix& m) {
  Vector v(m.rows() * m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    v.segment(i * m.cols(), m.cols()) = m.row(i).transpose();
  return v;
}

/// SVD of the A-major matricization; xi = sum_r s_r left_r (x) right_r.
inline SchmidtDecomposition schmidt(const Vector& xi, int dA, int dB) {
  if (xi.norm() == 0.0) throw std::invalid_argument("schmidt: zero vector");
  Matrix m = matricize(xi, dA, dB);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SchmidtDecomposition out;
  out.coefficients = svd.singularValues();
  const int r = static_cast<int>(out.coefficients.size());
  out.left_vectors.reserve(r);
  out.right_vectors.reserve(r);
  for (int k = 0; k < r; ++k) {
    out.left_vectors.push_back(svd.matrixU().col(k));
    // xi(i*dB+k) = sum_r s_r U(i,r) conj(V(k,r))
    out.right_vectors.push_back(svd.matrixV().col(k).conjugate());
  }
  return out;
}

inline int schmidt_rank(const Vector& xi, int dA, int dB, double tol = 1e-9) {
  auto sd = schmidt(xi, dA, dB);
  double top = sd.coefficients.size() ? sd.coefficients(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < sd.coefficients.size(); ++i)
    if (sd.coefficients(i) > tol * top) ++rank;
  return rank;
}

// FNV-1a over the raw little-endian bytes of the entries, row major.
inline std::uint64_t matrix_hash(const Matrix& m) {
  std::uint64_t h = 1469598103934665603ull;
  auto absorb = [&h](double x) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(x));
    std::memcpy(&bits, &x, sizeof(bits));
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      absorb(m(i, j).real());
      absorb(m(i, j).imag());
    }
  return h;
}

}  // namespace mapcones
