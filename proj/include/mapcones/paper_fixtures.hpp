#pragma once

// Built-in fixture battery: every closed-form fact the library is calibrated
// against, replayed as a pass/fail table.  Ships in the binary so the run
// needs no input files.

#include "mapcones/cones.hpp"
#include "mapcones/harness.hpp"
#include "mapcones/membership.hpp"
#include "mapcones/pptsquare.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace mapcones {

namespace fixtures {

struct Row {
  std::string name;
  std::string expected;
  std::string computed;
  bool ok = false;
};

inline std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(9) << x;
  return os.str();
}

inline bool close(double a, double b, double tol = 1e-9) { return std::abs(a - b) <= tol; }

inline bool mat_close(const Matrix& a, const Matrix& b, double tol = 1e-9) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         (a - b).cwiseAbs().maxCoeff() <= tol;
}

inline Matrix printed_sigma_choi() {
  Matrix c = Matrix::Zero(4, 4);
  c(0, 0) = c(0, 3) = c(3, 0) = c(3, 3) = 1.0;
  c(2, 2) = 1.0;
  return c;
}

inline Matrix printed_sigma_star_choi() {
  Matrix c = Matrix::Zero(4, 4);
  c(0, 0) = c(0, 3) = c(3, 0) = c(3, 3) = 1.0;
  c(1, 1) = 1.0;
  return c;
}

inline std::vector<Row> build(const SolverOptions& opts) {
  std::vector<Row> rows;
  auto add = [&rows](const std::string& name, const std::string& exp, const std::string& got,
                     bool ok) { rows.push_back({name, exp, got, ok}); };
  auto add_status = [&](const std::string& name, Status expected,
                        const MembershipVerdict& v) {
    add(name, to_string(expected), to_string(v.status), v.status == expected);
  };

  const HPMap sigma = sigma_map(), tau = tau_map();

  // bilinear pairing and the sigma example
  {
    double got = map_pairing(phi_abcd(1, 1, 1, 1.0 / 3.0), sigma);
    add("pairing <phi_[1,1,1,1/3], sigma> = a+c+d-2", fmt(1.0 / 3.0), fmt(got),
        close(got, 1.0 / 3.0));
  }
  {
    bool ok = mat_close(flip(BipartiteMatrix(2, 2, printed_sigma_choi())).mat(),
                        printed_sigma_star_choi());
    add("flip(C_sigma) = printed C_sigma*", "match", ok ? "match" : "mismatch", ok);
  }
  {
    double lo = min_eigenvalue(partial_transpose(tau.choi()).mat());
    add("Gamma(C_tau) has a negative eigenvalue", "< 0", fmt(lo), lo < -1e-6);
  }
  {
    bool ok = mat_close(sigma.choi().mat(), printed_sigma_choi());
    add("from_kraus([I2, e21]) = printed C_sigma", "match", ok ? "match" : "mismatch", ok);
  }

  // the phi_[a,b,c,d] action on rank-one projectors
  {
    double a = 1, b = 1, c = 1, d = 1.0 / 3.0;
    Vector xi(2);
    xi << cxd(2, 0), cxd(1, 1);
    xi /= xi.norm();
    Matrix got = mapcones::apply(phi_abcd(a, b, c, d), Matrix(xi * xi.adjoint()));
    Matrix want(2, 2);
    double x2 = std::norm(xi(0)), y2 = std::norm(xi(1));
    want << a * x2 + c * y2, -xi(0) * std::conj(xi(1)), -std::conj(xi(0)) * xi(1),
        b * x2 + d * y2;
    add("phi_[a,b,c,d] on |xi><xi| matches the closed form", "match",
        mat_close(got, want) ? "match" : "mismatch", mat_close(got, want));
  }

  // adjoints
  {
    bool ok = mat_close(adjoint(sigma).choi().mat(), printed_sigma_star_choi());
    add("adjoint(sigma) = printed C_sigma*", "match", ok ? "match" : "mismatch", ok);
  }
  {
    bool ok = mat_close(adjoint(tau).choi().mat(), tau.choi().mat());
    add("adjoint(tau) = tau", "match", ok ? "match" : "mismatch", ok);
  }

  // composition Choi matrices with sigma*
  {
    double a = 0.7, b = 0.3, c = 1.3, d = 0.9;
    Matrix want = Matrix::Zero(4, 4);
    want(0, 0) = a;
    want(1, 1) = a + b;
    want(2, 2) = c;
    want(3, 3) = c + d;
    want(0, 3) = want(3, 0) = -1;
    bool ok = mat_close(compose(adjoint(sigma), phi_abcd(a, b, c, d)).choi().mat(), want);
    add("C_{sigma* o phi} has diag (a,a+b,c,c+d), -1 corners", "match",
        ok ? "match" : "mismatch", ok);
    Matrix want2 = Matrix::Zero(4, 4);
    want2(0, 0) = a + c;
    want2(1, 1) = b + d;
    want2(2, 2) = c;
    want2(3, 3) = d;
    want2(0, 3) = want2(3, 0) = -1;
    bool ok2 = mat_close(compose(phi_abcd(a, b, c, d), adjoint(sigma)).choi().mat(), want2);
    add("C_{phi o sigma*} has diag (a+c,b+d,c,d), -1 corners", "match",
        ok2 ? "match" : "mismatch", ok2);
  }

  // the phi_beta o sigma o phi_alpha family and the strict-inclusion pairing
  {
    double al = 2.0, be = 1.0 / std::sqrt(5.0);
    HPMap comp = compose(phi_alpha(be), compose(sigma, phi_alpha(al)));
    Matrix want = Matrix::Zero(4, 4);
    want(0, 0) = al * be;
    want(2, 2) = be / al;
    want(3, 3) = 1.0 / (al * be);
    want(0, 3) = want(3, 0) = 1.0;
    add("C_{phi_beta o sigma o phi_alpha} matches the displayed matrix", "match",
        mat_close(comp.choi().mat(), want) ? "match" : "mismatch",
        mat_close(comp.choi().mat(), want));

    double s = 1.0 / std::sqrt(2.0);
    double got = map_pairing(phi_uniform(s), comp);
    double closed = s * (al * be + be / al + 1.0 / (al * be)) - 2.0;
    add("<psi_[1/sqrt2], phi_b o sigma o phi_a> = (1/sqrt2)(ab+b/a+1/ab)-2",
        fmt(closed), fmt(got), close(got, closed));
    add("threshold quantity below 2 at (alpha,beta)=(2,1/sqrt5)", "< 2",
        fmt(got + 2.0), got + 2.0 < 2.0 - 1e-3);
  }

  // composition by left ampliation
  {
    Rng rng(17);
    HPMap phi = from_choi(2, 2, random_hermitian(4, rng));
    HPMap psi = from_choi(2, 2, random_hermitian(4, rng));
    bool ok = mat_close(ampliate_left(psi, 2, phi.choi()).mat(),
                        compose(psi, phi).choi().mat(), 1e-10);
    add("(1_A (x) psi)(C_phi) = C_{psi o phi}", "match", ok ? "match" : "mismatch", ok);
  }

  // positivity thresholds of the family
  add_status("phi_[1,1,1,1/3] is a positive map (sqrt(ad)+sqrt(bc) >= 1)", Status::Member,
             is_positive_k(phi_abcd(1, 1, 1, 1.0 / 3.0), 1, opts));
  add_status("phi_[0.2,0.3,0.3,0.2] is not a positive map", Status::NonMember,
             is_positive_k(phi_abcd(0.2, 0.3, 0.3, 0.2), 1, opts));
  add_status("phi_[0.6] is a positive map (a >= 1/2)", Status::Member,
             is_positive_k(phi_uniform(0.6), 1, opts));
  add_status("phi_[0.4] is not a positive map", Status::NonMember,
             is_positive_k(phi_uniform(0.4), 1, opts));

  // tau facts
  add_status("tau is completely positive", Status::Member, is_cp(tau, opts));
  add_status("tau is not a PPT map", Status::NonMember, is_ppt_map(tau, opts));
  add_status("tau is not entanglement breaking", Status::NonMember,
             is_superpositive_k(tau, 1, opts));

  // superpositivity generators and the small-dimension rule
  {
    Rng rng(5);
    Matrix v = random_unit_vector(2, rng) * random_unit_vector(2, rng).adjoint();
    add_status("Ad_V with rank-one V is entanglement breaking", Status::Member,
               is_superpositive_k(from_kraus({v}), 1, opts));
  }
  add_status("PPT Choi at 2x2 is entanglement breaking", Status::Member,
             is_superpositive_k(sample_ppt_map(2, 2, 11), 1, opts));
  add_status("positive phi_[1,1,1,1/3] is decomposable at 2x2", Status::Member,
             is_decomposable(phi_abcd(1, 1, 1, 1.0 / 3.0), opts));

  // the worked cone K = SP_1 v {sigma}
  const AugmentedCone K = example_cone();
  add_status("phi_[1,1,1,1] in K° (a+c+d >= 2)", Status::Member,
             in_dual(K, phi_abcd(1, 1, 1, 1), opts));
  add_status("phi_[1/3,1,1,1/3] not in K° (a+c+d < 2)", Status::NonMember,
             in_dual(K, phi_abcd(1.0 / 3.0, 1, 1, 1.0 / 3.0), opts));
  add_status("phi_[0.7] in K° (a >= 2/3)", Status::Member,
             in_dual(K, phi_uniform(0.7), opts));
  add_status("phi_[0.6] not in K°", Status::NonMember, in_dual(K, phi_uniform(0.6), opts));

  add_status("phi_[1,1,1,1/3] in K^> (a(c+d) >= 1)", Status::Member,
             in_rdual(K, phi_abcd(1, 1, 1, 1.0 / 3.0), opts));
  add_status("phi_[1/3,1,1,1] not in K^>", Status::NonMember,
             in_rdual(K, phi_abcd(1.0 / 3.0, 1, 1, 1), opts));
  add_status("phi_[1/3,1,1,1] in K^< ((a+c)d >= 1)", Status::Member,
             in_ldual(K, phi_abcd(1.0 / 3.0, 1, 1, 1), opts));
  add_status("phi_[1,1,1,1/3] not in K^<", Status::NonMember,
             in_ldual(K, phi_abcd(1, 1, 1, 1.0 / 3.0), opts));
  add_status("phi_[0.72] in K^> (a >= 1/sqrt2)", Status::Member,
             in_rdual(K, phi_uniform(0.72), opts));
  add_status("phi_[0.69] not in K^>", Status::NonMember, in_rdual(K, phi_uniform(0.69), opts));
  add_status("phi_[0.72] in K^<", Status::Member, in_ldual(K, phi_uniform(0.72), opts));
  add_status("phi_[0.69] not in K^<", Status::NonMember, in_ldual(K, phi_uniform(0.69), opts));

  {
    MembershipVerdict v = in_cone(K, tau_map(), opts);
    bool ok = v.is_non_member() && std::abs(v.gap) > 1e-6;
    add("tau not in K: feasibility tau = phi_sp1 + lambda sigma fails",
        "infeasible, gap > 1e-6", std::string(to_string(v.status)) + ", gap " + fmt(v.gap),
        ok);
  }

  {
    Matrix c = Matrix::Zero(4, 4);
    c(0, 0) = 1.0;
    auto rep = check_one_sided_equivalences(ConeSpec::cp_after(from_choi(2, 2, c)), 1, 3,
                                            opts);
    bool ok = rep.failures() == 0;
    add("dual of CP o {e11 (x) e11} contains a non-positive map", "exhibited",
        ok ? "exhibited" : "not found", ok);
  }

  // ampliation corollaries
  {
    HPMap phi = phi_abcd(1, 1, 1, 1);  // in K^>
    bool ok = is_psd(ampliate_left(adjoint(sigma), 2, phi.choi()).mat(), opts.tol);
    add("phi in K^> implies (1 (x) sigma*)(C_phi) is PSD", "PSD", ok ? "PSD" : "not PSD", ok);
  }
  {
    bool ok = true;
    for (int t = 0; t < 8 && ok; ++t) {
      Rng rng(mix_seed(23, t));
      BipartiteMatrix rho = random_separable(2, 2, 3, rng);
      std::uniform_real_distribution<double> u(0.0, 2.0);
      double a, b, c, d;
      do {
        a = u(rng); b = u(rng); c = u(rng); d = u(rng);
      } while (std::sqrt(a * d) + std::sqrt(b * c) < 1.02);
      ok = is_psd(ampliate_right(phi_abcd(a, b, c, d), 2, rho).mat(), 1e-8);
    }
    add("(sigma (x) 1) maps separable states to PSD for positive sigma", "PSD",
        ok ? "PSD" : "violation", ok);
  }
  {
    bool ok = true;
    for (int t = 0; t < 6 && ok; ++t) {
      Rng rng(mix_seed(29, t));
      HPMap eb = sample_sp1_map(2, 2, 3, rng);
      HPMap cp = sample_cp_map(2, 2, 2, rng);
      BipartiteMatrix img = ampliate_left(eb, 2, cp.choi());
      ok = is_psd(img.mat(), 1e-8) && is_psd(partial_transpose(img).mat(), 1e-8);
    }
    add("EB map ampliation sends states to separable states (2x2: PPT)", "separable",
        ok ? "separable" : "violation", ok);
  }

  // block Schur summation realizes composition
  {
    Rng rng(31);
    HPMap phi = from_choi(2, 3, random_hermitian(6, rng));
    HPMap psi = from_choi(3, 2, random_hermitian(6, rng));
    bool ok = mat_close(block_schur_sum(flip(phi.choi()), psi.choi()).mat(),
                        compose(psi, phi).choi().mat(), 1e-10);
    add("block Schur sum of (flip C_phi, C_psi) = C_{psi o phi}", "match",
        ok ? "match" : "mismatch", ok);
  }

  // composition of PPT maps at 2x2 is entanglement breaking (sampled)
  {
    bool ok = true;
    for (int t = 0; t < 3 && ok; ++t) {
      HPMap a = sample_ppt_map(2, 2, mix_seed(41, 2 * t));
      HPMap b = sample_ppt_map(2, 2, mix_seed(41, 2 * t + 1));
      TrialRecord rec = ppt_square_trial(a, b, opts);
      ok = rec.eb.is_member();
    }
    add("sampled PPT o PPT at 2x2 is entanglement breaking", "member",
        ok ? "member" : "violation", ok);
  }

  return rows;
}

}  // namespace fixtures

/// Prints the fixture table; returns true iff every row passed.
inline bool run_paper_fixtures(std::ostream& out, const SolverOptions& opts = {}) {
  auto rows = fixtures::build(opts);
  std::size_t wname = 0, wexp = 0, wgot = 0;
  for (const auto& r : rows) {
    wname = std::max(wname, r.name.size());
    wexp = std::max(wexp, r.expected.size());
    wgot = std::max(wgot, r.computed.size());
  }
  int pass = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out << std::setw(3) << i + 1 << "  " << std::left << std::setw(static_cast<int>(wname))
        << r.name << "  " << std::setw(static_cast<int>(wexp)) << r.expected << "  "
        << std::setw(static_cast<int>(wgot)) << r.computed << "  "
        << (r.ok ? "PASS" : "FAIL") << std::right << "\n";
    if (r.ok) ++pass;
  }
  out << pass << "/" << rows.size() << " fixtures passed\n";
  return pass == static_cast<int>(rows.size());
}

}  // namespace mapcones
