#pragma once

// First-order conic machinery:
//  * Dykstra projection onto the PPT spectrahedron (PSD intersect Gamma-PSD),
//  * an alternating-projection solver for conic-sum feasibility problems
//      sum_i A_i(Z_i) = C,  Z_i in {PSD cone, ray},
//    with the affine part handled by an exact (precomputed) least-squares
//    projection and a Dykstra correction on the cone side.
//
// All projections are eigendecompositions; no external solver is involved.

#include "mapcones/matrix.hpp"
#include "mapcones/verdict.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace mapcones {

// --- real vectorization of the Hermitian space (Frobenius isometry) --------

inline int herm_vec_dim(int n) { return n * n; }

inline Eigen::VectorXd herm_to_vec(const Matrix& x) {
  const int n = static_cast<int>(x.rows());
  Eigen::VectorXd v(n * n);
  int p = 0;
  const double s = std::sqrt(2.0);
  for (int i = 0; i < n; ++i) v(p++) = x(i, i).real();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      v(p++) = s * x(i, j).real();
      v(p++) = s * x(i, j).imag();
    }
  return v;
}

inline Matrix vec_to_herm(const Eigen::VectorXd& v, int n) {
  Matrix x = Matrix::Zero(n, n);
  int p = 0;
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i) x(i, i) = v(p++);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double re = s * v(p++), im = s * v(p++);
      x(i, j) = cxd(re, im);
      x(j, i) = cxd(re, -im);
    }
  return x;
}

/// Real matrix of a Hermitian-preserving linear map H_n_in -> H_n_out.
inline Eigen::MatrixXd op_matrix(int n_in, int n_out,
                                 const std::function<Matrix(const Matrix&)>& f) {
  const int din = herm_vec_dim(n_in), dout = herm_vec_dim(n_out);
  Eigen::MatrixXd m(dout, din);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(din);
  for (int c = 0; c < din; ++c) {
    e(c) = 1.0;
    m.col(c) = herm_to_vec(f(vec_to_herm(e, n_in)));
    e(c) = 0.0;
  }
  return m;
}

// --- Dykstra projection onto PSD intersect Gamma-PSD -----------------------

struct PptProjection {
  Matrix point;
  int iterations = 0;
  bool converged = false;
  double psd_violation = 0.0;  // most negative eigenvalue seen at exit
};

inline Matrix pt_raw(const Matrix& x, int dA, int dB) {
  Matrix out(dA * dB, dA * dB);
  for (int i = 0; i < dA; ++i)
    for (int j = 0; j < dA; ++j)
      out.block(i * dB, j * dB, dB, dB) = x.block(i * dB, j * dB, dB, dB).transpose();
  return out;
}

/// Dykstra alternating projections between the PSD cone and its partial
/// transpose; converges to the Frobenius-nearest PPT matrix.
inline PptProjection project_ppt(const Matrix& x0, int dA, int dB, double tol = 1e-11,
                                 int max_iter = 4000) {
  Matrix x = hermitize(x0);
  const double scale = 1.0 + max_abs(x);
  Matrix p = Matrix::Zero(x.rows(), x.cols());
  Matrix q = p;
  PptProjection out;
  for (int it = 0; it < max_iter; ++it) {
    Matrix y = psd_project(x + p);
    p = x + p - y;
    Matrix z = pt_raw(psd_project(pt_raw(Matrix(y + q), dA, dB)), dA, dB);
    q = y + q - z;
    double drift = (z - x).norm();
    x = z;
    if (it % 8 == 7 || drift <= 1e-14 * scale) {
      double v1 = min_eigenvalue(x);
      double v2 = min_eigenvalue(pt_raw(x, dA, dB));
      out.psd_violation = std::min(v1, v2);
      if (out.psd_violation >= -tol * scale && drift <= 1e-12 * scale) {
        out.iterations = it + 1;
        out.converged = true;
        out.point = hermitize(x);
        return out;
      }
    }
  }
  out.iterations = max_iter;
  out.point = hermitize(psd_project(pt_raw(psd_project(pt_raw(x, dA, dB)), dA, dB)));
  double v1 = min_eigenvalue(out.point);
  double v2 = min_eigenvalue(pt_raw(out.point, dA, dB));
  out.psd_violation = std::min(v1, v2);
  out.converged = out.psd_violation >= -tol * scale;
  return out;
}

// --- conic-sum feasibility --------------------------------------------------

/// Find Z_i in cone_i with sum_i A_i(Z_i) = C (plus optional coupling rows).
/// PPT blocks are modeled by lifting: a PSD block S plus a PSD block S' tied
/// by the coupling row Gamma(S) - S' = 0, so every cone projection is a
/// plain eigenvalue clip or a ray clip.
class ConicSumProblem {
 public:
  enum class BlockKind { Psd, Ray };

  struct Block {
    BlockKind kind;
    int herm_dim;   // matrices are herm_dim x herm_dim
    Matrix ray;     // direction for Ray blocks (unnormalized)
    int offset = 0; // column offset in the stacked real vectorization
  };

  /// target dimension n: constraint space starts with H_n (the C-rows).
  explicit ConicSumProblem(int target_dim) : target_dim_(target_dim) {}

  int add_psd_block(int herm_dim, const Eigen::MatrixXd& to_target) {
    blocks_.push_back({BlockKind::Psd, herm_dim, Matrix(), 0});
    target_ops_.push_back(to_target);
    return static_cast<int>(blocks_.size()) - 1;
  }

  int add_ray_block(const Matrix& direction, const Eigen::MatrixXd& to_target) {
    const int n = static_cast<int>(direction.rows());
    blocks_.push_back({BlockKind::Ray, n, hermitize(direction), 0});
    target_ops_.push_back(to_target);
    return static_cast<int>(blocks_.size()) - 1;
  }

  /// Extra homogeneous rows: sum_i R_i(Z_i) = 0 (e.g. Gamma(S) - S' = 0).
  void add_coupling(int rows, const std::vector<std::pair<int, Eigen::MatrixXd>>& terms) {
    couplings_.push_back({rows, terms});
  }

  struct Result {
    Status status = Status::Unknown;
    double residual = 0.0;         // ||constraint violation|| at the cone point
    std::vector<Matrix> blocks;    // cone-feasible block values
    Matrix target_residual;        // C - (reconstructed target rows)
    int iterations = 0;
  };

  Result solve(const Matrix& target, const SolverOptions& opts = {}) const {
    const int n_t = target_dim_;
    if (target.rows() != n_t) throw DimensionError("ConicSumProblem: bad target size");

    int total = 0;
    std::vector<int> offs(blocks_.size());
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      offs[i] = total;
      total += herm_vec_dim(blocks_[i].herm_dim);
    }
    int rows = herm_vec_dim(n_t);
    for (auto& cp : couplings_) rows += cp.rows;

    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, total);
    for (std::size_t i = 0; i < blocks_.size(); ++i)
      m.block(0, offs[i], herm_vec_dim(n_t), herm_vec_dim(blocks_[i].herm_dim)) =
          target_ops_[i];
    int row0 = herm_vec_dim(n_t);
    for (auto& cp : couplings_) {
      for (auto& [bi, op] : cp.terms)
        m.block(row0, offs[bi], cp.rows, herm_vec_dim(blocks_[bi].herm_dim)) = op;
      row0 += cp.rows;
    }
    Eigen::VectorXd c = Eigen::VectorXd::Zero(rows);
    c.head(herm_vec_dim(n_t)) = herm_to_vec(hermitize(target));

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(m);

    const double scale = 1.0 + target.norm();
    const double feas_tol = opts.tol * scale;
    const int max_iter = opts.max_iter > 0 ? opts.max_iter : 20000;

    Eigen::VectorXd z = Eigen::VectorXd::Zero(total);   // cone-side iterate
    Eigen::VectorXd corr = Eigen::VectorXd::Zero(total);  // Dykstra increment

    auto project_cone = [&](Eigen::VectorXd& v) {
      for (std::size_t i = 0; i < blocks_.size(); ++i) {
        const auto& b = blocks_[i];
        const int d = herm_vec_dim(b.herm_dim);
        if (b.kind == BlockKind::Psd) {
          Matrix x = vec_to_herm(v.segment(offs[i], d), b.herm_dim);
          v.segment(offs[i], d) = herm_to_vec(psd_project(x));
        } else {
          Matrix x = vec_to_herm(v.segment(offs[i], d), b.herm_dim);
          double num = pairing_raw(b.ray.conjugate(), x).real();  // HS inner product
          double den = b.ray.squaredNorm();
          double t = std::max(0.0, num / den);
          v.segment(offs[i], d) = herm_to_vec(Matrix(t * b.ray));
        }
      }
    };

    double best_res = 1e300;
    int since_best = 0;
    Result out;
    int it = 0;
    for (; it < max_iter; ++it) {
      // exact projection onto the affine slice {m z = c}
      Eigen::VectorXd y = z - cod.solve(Eigen::VectorXd(m * z - c));
      Eigen::VectorXd w = y + corr;
      Eigen::VectorXd zc = w;
      project_cone(zc);
      corr = w - zc;
      z = zc;
      double res = (m * z - c).norm();
      if (res <= feas_tol) {
        out.status = Status::Member;
        best_res = res;
        break;
      }
      if (res < best_res * (1.0 - 1e-7)) {
        best_res = res;
        since_best = 0;
      } else if (++since_best > 400) {
        break;  // stalled
      }
    }

    out.iterations = it + 1;
    out.residual = best_res;
    out.blocks.reserve(blocks_.size());
    for (std::size_t i = 0; i < blocks_.size(); ++i)
      out.blocks.push_back(
          vec_to_herm(z.segment(offs[i], herm_vec_dim(blocks_[i].herm_dim)), blocks_[i].herm_dim));
    Eigen::VectorXd viol = c - m * z;
    out.target_residual = vec_to_herm(viol.head(herm_vec_dim(n_t)), n_t);

    if (out.status != Status::Member) {
      // plateaued well above tolerance => certified infeasible; otherwise
      // the budget ran out while still making progress.
      if (since_best > 400 && best_res > 100.0 * feas_tol)
        out.status = Status::NonMember;
      else
        out.status = Status::Unknown;
    }
    return out;
  }

 private:
  struct Coupling {
    int rows;
    std::vector<std::pair<int, Eigen::MatrixXd>> terms;
  };

  int target_dim_;
  std::vector<Block> blocks_;
  std::vector<Eigen::MatrixXd> target_ops_;
  std::vector<Coupling> couplings_;
};

/// Identity operator on H_n in the real vectorization.
inline Eigen::MatrixXd op_identity(int n) {
  return Eigen::MatrixXd::Identity(herm_vec_dim(n), herm_vec_dim(n));
}

}  // namespace mapcones
