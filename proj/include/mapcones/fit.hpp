#pragma once

// Constructive Schmidt-number fitting: approximate a Hermitian target C by a
// conic combination of rank-one projectors |eta><eta| with Schmidt rank of
// eta at most k (the Choi cone of k-superpositive maps).  Fully corrective
// Frank-Wolfe: the linear minimization oracle is the seesaw, weights are
// refit by nonnegative least squares after every new atom.

#include "mapcones/matrix.hpp"
#include "mapcones/seesaw.hpp"

#include <vector>

namespace mapcones {

namespace detail {

/// min ||sum_r t_r a_r - target||^2 over t >= 0, given Gram h and overlaps b.
/// Lawson-Hanson active set on the normal equations.
inline std::vector<double> nnls(const Eigen::MatrixXd& h, const Eigen::VectorXd& b) {
  const int n = static_cast<int>(b.size());
  std::vector<bool> active(n, false);
  Eigen::VectorXd t = Eigen::VectorXd::Zero(n);
  for (int outer = 0; outer < 3 * n + 30; ++outer) {
    Eigen::VectorXd grad = b - h * t;
    int best = -1;
    double best_g = 1e-12 * (1.0 + b.cwiseAbs().maxCoeff());
    for (int i = 0; i < n; ++i)
      if (!active[i] && grad(i) > best_g) {
        best_g = grad(i);
        best = i;
      }
    if (best < 0) break;
    active[best] = true;
    for (int inner = 0; inner < 3 * n + 30; ++inner) {
      std::vector<int> idx;
      for (int i = 0; i < n; ++i)
        if (active[i]) idx.push_back(i);
      Eigen::MatrixXd hs(idx.size(), idx.size());
      Eigen::VectorXd bs(idx.size());
      for (std::size_t r = 0; r < idx.size(); ++r) {
        bs(r) = b(idx[r]);
        for (std::size_t c = 0; c < idx.size(); ++c) hs(r, c) = h(idx[r], idx[c]);
      }
      Eigen::VectorXd ts = (hs + 1e-13 * Eigen::MatrixXd::Identity(hs.rows(), hs.cols()))
                               .ldlt()
                               .solve(bs);
      if ((ts.array() > 0).all()) {
        t.setZero();
        for (std::size_t r = 0; r < idx.size(); ++r) t(idx[r]) = ts(r);
        break;
      }
      // step toward ts until the first coordinate hits zero, deactivate it
      double alpha = 1.0;
      int drop = -1;
      for (std::size_t r = 0; r < idx.size(); ++r)
        if (ts(r) <= 0) {
          double cur = t(idx[r]);
          double a = cur / (cur - ts(r) + 1e-300);
          if (a < alpha) {
            alpha = a;
            drop = idx[r];
          }
        }
      for (std::size_t r = 0; r < idx.size(); ++r)
        t(idx[r]) = t(idx[r]) + alpha * (ts(r) - t(idx[r]));
      if (drop >= 0) {
        t(drop) = 0.0;
        active[drop] = false;
      }
    }
  }
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = std::max(0.0, t(i));
  return out;
}

}  // namespace detail

struct SchmidtFitResult {
  bool fitted = false;
  double residual = 0.0;      // ||sum_r t_r atom_r - C||_F
  double lmo_floor = 0.0;     // last oracle value on the gradient
  std::vector<Vector> atoms;  // unit vectors eta_r
  std::vector<double> weights;
  Matrix gradient;            // X - C at exit
  int iterations = 0;

  Matrix reconstruction(int n) const {
    Matrix x = Matrix::Zero(n, n);
    for (std::size_t r = 0; r < atoms.size(); ++r)
      x += weights[r] * (atoms[r] * atoms[r].adjoint());
    return x;
  }
};

/// Frank-Wolfe fit of C by the cone of Schmidt-rank-<=k projectors.
/// Stops when the residual reaches fit_tol or the oracle certifies that no
/// descent atom remains (lmo_floor >= -stall_tol).
inline SchmidtFitResult fit_schmidt_cone(const BipartiteMatrix& cmat, int k,
                                         const SolverOptions& opts = {},
                                         int max_atoms = 350) {
  const int n = cmat.dim();
  const Matrix& c = cmat.mat();
  const double scale = 1.0 + c.norm();
  const double fit_tol = 10.0 * opts.tol * scale;
  const double stall_tol = 0.1 * opts.tol * scale;

  SchmidtFitResult res;
  Matrix x = Matrix::Zero(n, n);
  std::vector<Vector> atoms;
  Eigen::MatrixXd gram(0, 0);
  Eigen::VectorXd overlap(0);

  SolverOptions lmo = opts.light();
  const int cap = opts.max_iter > 0 ? opts.max_iter : max_atoms;
  for (int it = 0; it < cap; ++it) {
    Matrix g = x - c;
    res.residual = g.norm();
    res.gradient = g;
    res.iterations = it;
    if (res.residual <= fit_tol) {
      res.fitted = true;
      break;
    }
    auto ora = min_schmidt_overlap(BipartiteMatrix(cmat.dimA(), cmat.dimB(), g), k,
                                   lmo.with_seed(mix_seed(opts.seed, 31 + it)),
                                   /*polish=*/it % 16 == 15);
    // oracle works on eta = conj(xi)
    Vector eta = ora.xi.conjugate();
    res.lmo_floor = ora.value;
    if (ora.value >= -stall_tol) break;  // no descent atom left

    const int m = static_cast<int>(atoms.size());
    Eigen::MatrixXd gram2(m + 1, m + 1);
    gram2.topLeftCorner(m, m) = gram;
    Eigen::VectorXd overlap2(m + 1);
    overlap2.head(m) = overlap;
    for (int r = 0; r < m; ++r) {
      double ov = std::norm(cxd((atoms[r].adjoint() * eta)(0)));
      gram2(r, m) = gram2(m, r) = ov;
    }
    gram2(m, m) = 1.0;
    overlap2(m) = (eta.adjoint() * c * eta)(0).real();
    atoms.push_back(eta);
    gram = gram2;
    overlap = overlap2;

    std::vector<double> w = detail::nnls(gram, overlap);
    // prune dead atoms to keep the active set small
    std::vector<Vector> kept;
    std::vector<double> kw;
    for (std::size_t r = 0; r < atoms.size(); ++r)
      if (w[r] > 1e-14) {
        kept.push_back(atoms[r]);
        kw.push_back(w[r]);
      }
    if (kept.size() != atoms.size()) {
      atoms = kept;
      const int mm = static_cast<int>(atoms.size());
      gram.resize(mm, mm);
      overlap.resize(mm);
      for (int r = 0; r < mm; ++r) {
        overlap(r) = (atoms[r].adjoint() * c * atoms[r])(0).real();
        for (int s = 0; s < mm; ++s)
          gram(r, s) = std::norm(cxd((atoms[r].adjoint() * atoms[s])(0)));
      }
      w = kw;
    }
    x.setZero();
    for (std::size_t r = 0; r < atoms.size(); ++r)
      x += w[r] * (atoms[r] * atoms[r].adjoint());
    res.atoms = atoms;
    res.weights = w;
  }
  if (!res.fitted) {
    Matrix g = x - c;
    res.residual = g.norm();
    res.gradient = g;
    res.fitted = res.residual <= fit_tol;
  }
  return res;
}

}  // namespace mapcones
