#pragma once

// Alternating (seesaw) minimization of <C, |xi><xi|> over unit vectors xi
// in C^A (x) C^B with Schmidt rank <= k.
//
// Writing eta = conj(xi), the objective is the quadratic form eta^* C eta
// and the Schmidt-rank constraint is eta = vec(L R^*) for frames
// L (dA x k), R (dB x k).  Holding one frame fixed (with orthonormal
// columns) the objective is an exact Hermitian eigenproblem in the other,
// so each half-sweep is an exact update and the value is non-increasing.

#include "mapcones/matrix.hpp"
#include "mapcones/sampling.hpp"
#include "mapcones/verdict.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <optional>
#include <utility>
#include <vector>

namespace mapcones {

struct SchmidtOverlapResult {
  double value = 0.0;
  Vector xi;         // optimizer, <C, xi xi^*> == value
  int best_restart = -1;
  int sweeps = 0;    // sweeps used by the winning restart
  bool converged = false;
};

namespace detail {

inline void eig_min_2x2(const Matrix& m, double& val, Vector& v) {
  const double a = m(0, 0).real(), d = m(1, 1).real();
  const cxd b = m(0, 1);
  const double t = 0.5 * (a + d), delta = 0.5 * (a - d);
  const double r = std::sqrt(delta * delta + std::norm(b));
  val = t - r;
  v.resize(2);
  // pick the numerically larger residual column of (m - val I)
  const cxd c1 = b, c2 = cxd(val - a, 0.0);
  const cxd d1 = cxd(val - d, 0.0), d2 = std::conj(b);
  if (std::norm(c1) + std::norm(c2) >= std::norm(d1) + std::norm(d2)) {
    v(0) = c1;
    v(1) = c2;
  } else {
    v(0) = d1;
    v(1) = d2;
  }
  double n = v.norm();
  if (n < 1e-300) {
    v(0) = 1;
    v(1) = 0;
  } else {
    v /= n;
  }
}

inline void eig_min_small(const Matrix& m, double& val, Vector& v) {
  if (m.rows() == 2) {
    eig_min_2x2(m, val, v);
    return;
  }
  auto p = min_eigenpair(m);
  val = p.value;
  v = p.vector;
}

/// Orthonormalizes the columns of f in place (thin QR).
inline void orthonormalize(Matrix& f) {
  Eigen::HouseholderQR<Matrix> qr(f);
  f = qr.householderQ() * Matrix::Identity(f.rows(), f.cols());
}

// One exact half-update: with R orthonormal, eta = vec(L R^*) is an isometric
// image of vec(L); minimize over vec(L) by the bottom eigenvector of T^* C T.
inline double update_left_frame(const Matrix& c, int dA, int dB, int k, const Matrix& r,
                                Matrix& l) {
  Matrix t = Matrix::Zero(dA * dB, dA * k);
  for (int j = 0; j < dA; ++j)
    for (int s = 0; s < k; ++s) t.block(j * dB, j * k + s, dB, 1) = r.col(s).conjugate();
  Matrix h = hermitize(t.adjoint() * c * t);
  double val;
  Vector w;
  eig_min_small(h, val, w);
  for (int j = 0; j < dA; ++j)
    for (int s = 0; s < k; ++s) l(j, s) = w(j * k + s);
  return val;
}

inline double update_right_frame(const Matrix& c, int dA, int dB, int k, const Matrix& l,
                                 Matrix& r) {
  // eta = sum_{b,s} conj(R(b,s)) l_s (x) e_b; solve for w = conj(vec(R)).
  Matrix t = Matrix::Zero(dA * dB, dB * k);
  for (int b = 0; b < dB; ++b)
    for (int s = 0; s < k; ++s)
      for (int i = 0; i < dA; ++i) t(i * dB + b, b * k + s) = l(i, s);
  Matrix h = hermitize(t.adjoint() * c * t);
  double val;
  Vector w;
  eig_min_small(h, val, w);
  for (int b = 0; b < dB; ++b)
    for (int s = 0; s < k; ++s) r(b, s) = std::conj(w(b * k + s));
  return val;
}

struct SeesawRun {
  double value;
  Matrix l, r;
  int sweeps;
  bool converged;
};

inline SeesawRun seesaw_from(const Matrix& c, int dA, int dB, int k, Matrix l, Matrix r,
                             int max_sweeps) {
  double value = 1e300;
  bool converged = false;
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    orthonormalize(r);
    update_left_frame(c, dA, dB, k, r, l);
    orthonormalize(l);
    double v = update_right_frame(c, dA, dB, k, l, r);
    if (std::abs(value - v) <= 1e-13 * (1.0 + std::abs(v))) {
      value = v;
      converged = true;
      ++sweep;
      break;
    }
    value = v;
  }
  return {value, l, r, sweep, converged};
}

inline Vector frame_vector(const Matrix& l, const Matrix& r) {
  Matrix m = l * r.adjoint();
  Vector eta = vectorize(m);
  return eta / eta.norm();
}

// Deterministic product-vector scan for k = 1, dA <= 3: grid over the A-side
// ray, exact eigen-minimization on the B side.
inline std::optional<std::pair<double, std::pair<Matrix, Matrix>>> product_grid_scan(
    const Matrix& c, int dA, int dB) {
  if (dA > 3) return std::nullopt;
  const int n_theta = 14, n_phase = 12;
  double best = 1e300;
  Vector best_u;
  auto consider = [&](const Vector& u) {
    Matrix b = Matrix::Zero(dB, dB);
    for (int i = 0; i < dA; ++i)
      for (int j = 0; j < dA; ++j)
        b += std::conj(u(i)) * u(j) * c.block(i * dB, j * dB, dB, dB);
    double val;
    Vector v;
    eig_min_small(hermitize(b), val, v);
    if (val < best) {
      best = val;
      best_u = u;
    }
  };
  const double pi = 3.14159265358979323846;
  if (dA == 2) {
    for (int a = 0; a <= n_theta; ++a) {
      double th = 0.5 * pi * a / n_theta;
      for (int p = 0; p < n_phase; ++p) {
        double ph = 2.0 * pi * p / n_phase;
        Vector u(2);
        u << std::cos(th), std::sin(th) * std::exp(cxd(0, ph));
        consider(u);
      }
    }
  } else {
    const int nt = 7, np = 6;  // coarser for CP^2
    for (int a = 0; a <= nt; ++a)
      for (int b2 = 0; b2 <= nt; ++b2) {
        double t1 = 0.5 * pi * a / nt, t2 = 0.5 * pi * b2 / nt;
        for (int p1 = 0; p1 < np; ++p1)
          for (int p2 = 0; p2 < np; ++p2) {
            Vector u(3);
            u << std::cos(t1), std::sin(t1) * std::cos(t2) * std::exp(cxd(0, 2 * pi * p1 / np)),
                std::sin(t1) * std::sin(t2) * std::exp(cxd(0, 2 * pi * p2 / np));
            consider(u);
          }
      }
  }
  if (best_u.size() == 0) return std::nullopt;
  // recover the matching B-side frame: eta = u (x) v means R = conj(v)
  Matrix b = Matrix::Zero(dB, dB);
  for (int i = 0; i < dA; ++i)
    for (int j = 0; j < dA; ++j)
      b += std::conj(best_u(i)) * best_u(j) * c.block(i * dB, j * dB, dB, dB);
  double val;
  Vector v;
  eig_min_small(hermitize(b), val, v);
  Matrix l = best_u, r = v.conjugate();
  return std::make_pair(best, std::make_pair(l, r));
}

}  // namespace detail

/// Minimizes <C, |xi><xi|> over unit xi of Schmidt rank <= k.  Deterministic
/// under fixed (seed, restarts, threads); restart results are merged by best
/// value with lowest-index tie break.  `polish` adds deterministic structured
/// starts (spectral starts and, for k=1 and small dA, a product-vector grid).
inline SchmidtOverlapResult min_schmidt_overlap(const BipartiteMatrix& cmat, int k,
                                                const SolverOptions& opts = {},
                                                bool polish = true) {
  const int dA = cmat.dimA(), dB = cmat.dimB();
  if (k < 1 || k > std::min(dA, dB))
    throw std::invalid_argument("min_schmidt_overlap: k out of range");
  const Matrix& c = cmat.mat();
  const int max_sweeps = opts.max_iter > 0 ? opts.max_iter : 500;

  struct Start {
    Matrix l, r;
  };
  std::vector<Start> starts;
  starts.reserve(opts.restarts + 8);
  for (int rix = 0; rix < opts.restarts; ++rix) {
    Rng rng(mix_seed(opts.seed, rix));
    starts.push_back({random_ginibre(dA, k, rng), random_ginibre(dB, k, rng)});
  }
  if (polish) {
    // spectral starts: Schmidt-truncate the lowest eigenvectors of C
    auto es = eig_herm(c);
    const int n_spec = std::min<int>(4, dA * dB);
    for (int t = 0; t < n_spec; ++t) {
      Vector eta = es.eigenvectors().col(t);
      Matrix m = matricize(eta, dA, dB);
      Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
      int kk = std::min<int>(k, static_cast<int>(svd.singularValues().size()));
      Matrix l = svd.matrixU().leftCols(kk) *
                 svd.singularValues().head(kk).asDiagonal();
      Matrix r = svd.matrixV().leftCols(kk);
      if (kk < k) {  // pad with deterministic columns
        Rng rng(mix_seed(opts.seed, 7777 + t));
        Matrix lp = random_ginibre(dA, k, rng), rp = random_ginibre(dB, k, rng);
        lp.leftCols(kk) = l;
        rp.leftCols(kk) = r;
        l = lp;
        r = rp;
      }
      starts.push_back({l, r});
    }
    if (k == 1) {
      if (auto g = detail::product_grid_scan(c, dA, dB)) starts.push_back({g->second.first, g->second.second});
    }
  }

  auto run_one = [&](int idx) -> detail::SeesawRun {
    return detail::seesaw_from(c, dA, dB, k, starts[idx].l, starts[idx].r, max_sweeps);
  };

  std::vector<detail::SeesawRun> runs(starts.size());
  if (opts.threads > 1) {
    std::vector<std::future<void>> futs;
    std::atomic<int> next{0};
    for (int t = 0; t < opts.threads; ++t)
      futs.push_back(std::async(std::launch::async, [&]() {
        for (int i = next.fetch_add(1); i < static_cast<int>(starts.size());
             i = next.fetch_add(1))
          runs[i] = run_one(i);
      }));
    for (auto& f : futs) f.get();
  } else {
    for (std::size_t i = 0; i < starts.size(); ++i) runs[i] = run_one(static_cast<int>(i));
  }

  int best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i)
    if (runs[i].value < runs[best].value) best = static_cast<int>(i);

  SchmidtOverlapResult out;
  out.value = runs[best].value;
  Vector eta = detail::frame_vector(runs[best].l, runs[best].r);
  out.xi = eta.conjugate();
  out.best_restart = best;
  out.sweeps = runs[best].sweeps;
  out.converged = runs[best].converged;
  // report the exact evaluation at the returned optimizer
  out.value = pairing(c, Matrix(out.xi * out.xi.adjoint()));
  return out;
}

}  // namespace mapcones
