#pragma once

// Augmented cones K = SP_1 v cone{sigma_1..sigma_m} and their dual objects:
// the dual K°, the one-sided duals K^> = (K o CP)° and K^< = (CP o K)°, and
// feasibility-based membership in K itself and in the smallest one-sided
// mapping cones containing K.
//
// Everything dual reduces to finitely many checks: a positivity clause for
// the SP_1 part plus, per generator, a pairing sign (K°) or a CP check of a
// one-sided composition (K^>, K^<).

#include "mapcones/hpmap.hpp"
#include "mapcones/membership.hpp"
#include "mapcones/projections.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mapcones {

struct AugmentedCone {
  int dimA = 2, dimB = 2;
  bool include_sp1 = true;
  std::vector<HPMap> generators;
};

/// The worked 2x2 cone: SP_1 joined with sigma = 1 + Ad_{e21}.
inline AugmentedCone example_cone() {
  AugmentedCone k;
  k.dimA = k.dimB = 2;
  k.include_sp1 = true;
  k.generators.push_back(sigma_map());
  return k;
}

namespace detail {

inline void check_cone_dims(const AugmentedCone& k, const HPMap& phi, const char* who) {
  if (phi.dimA() != k.dimA || phi.dimB() != k.dimB)
    throw DimensionError(std::string(who) + ": map dims do not match the cone");
}

// Merges a clause margin into a verdict under construction.
struct ClauseAccum {
  double gap = 1e300;
  Status status = Status::Member;
  Certificate cert;
  std::string meta;

  void add(const MembershipVerdict& v, const std::string& tag) {
    if (v.gap < gap) gap = v.gap;
    if (v.status == Status::NonMember) {
      status = Status::NonMember;
      if (cert.empty()) {
        cert = v.certificate;
        meta = tag;
      }
    } else if (v.status == Status::Unknown && status == Status::Member) {
      status = Status::Unknown;
      meta = tag;
    }
  }
  void add_margin(double m, const std::string& tag, double tol) {
    if (m < gap) gap = m;
    if (m < -tol && status != Status::NonMember) {
      status = Status::NonMember;
      meta = tag;
    }
  }

  MembershipVerdict finish() const {
    MembershipVerdict v;
    v.status = status;
    v.gap = gap;
    v.certificate = cert;
    v.meta = meta;
    return v;
  }
};

}  // namespace detail

/// K° membership: phi in P_1 (when the SP_1 part is present) and
/// <phi, sigma_i> >= 0 for every generator.
inline MembershipVerdict in_dual(const AugmentedCone& k, const HPMap& phi,
                                 const SolverOptions& opts = {}) {
  detail::check_cone_dims(k, phi, "in_dual");
  detail::ClauseAccum acc;
  if (k.include_sp1) acc.add(is_positive_k(phi, 1, opts), "p1-clause");
  const double scale = 1.0 + phi.choi().mat().norm();
  for (std::size_t i = 0; i < k.generators.size(); ++i)
    acc.add_margin(map_pairing(phi, k.generators[i]),
                   "pairing-clause(generator " + std::to_string(i) + ")",
                   opts.tol * scale);
  return acc.finish();
}

/// K^> membership: phi in P_1 and sigma_i^* o phi completely positive.
inline MembershipVerdict in_rdual(const AugmentedCone& k, const HPMap& phi,
                                  const SolverOptions& opts = {}) {
  detail::check_cone_dims(k, phi, "in_rdual");
  detail::ClauseAccum acc;
  if (k.include_sp1) acc.add(is_positive_k(phi, 1, opts), "p1-clause");
  for (std::size_t i = 0; i < k.generators.size(); ++i)
    acc.add(is_cp(compose(adjoint(k.generators[i]), phi), opts),
            "cp-clause(adj(generator " + std::to_string(i) + ") o phi)");
  return acc.finish();
}

/// K^< membership: phi in P_1 and phi o sigma_i^* completely positive.
inline MembershipVerdict in_ldual(const AugmentedCone& k, const HPMap& phi,
                                  const SolverOptions& opts = {}) {
  detail::check_cone_dims(k, phi, "in_ldual");
  detail::ClauseAccum acc;
  if (k.include_sp1) acc.add(is_positive_k(phi, 1, opts), "p1-clause");
  for (std::size_t i = 0; i < k.generators.size(); ++i)
    acc.add(is_cp(compose(phi, adjoint(k.generators[i])), opts),
            "cp-clause(phi o adj(generator " + std::to_string(i) + "))");
  return acc.finish();
}

namespace detail {

inline MembershipVerdict conic_verdict(const ConicSumProblem::Result& r, bool exact_encoding,
                                       std::vector<Matrix> ray_dirs = {}) {
  MembershipVerdict v;
  v.status = r.status;
  if (r.status == Status::Member) {
    v.gap = r.residual;
    v.certificate.kind = "conic-decomposition";
    v.certificate.parts = r.blocks;
  } else {
    v.gap = -r.residual;
    v.certificate.kind = "conic-decomposition";
    v.certificate.parts = r.blocks;
    v.certificate.note = "best-approximation";
  }
  if (!exact_encoding) v.meta = "sp1-block-encoded-as-ppt(heuristic-above-2x3)";
  (void)ray_dirs;
  return v;
}

}  // namespace detail

/// Membership in K itself: C_phi = S + sum_i t_i C_{sigma_i} with S in the
/// SP_1 Choi cone (encoded as PPT matrices; exact for dims <= (2,3)/(3,2))
/// and t_i >= 0.  Solved by alternating projections.
inline MembershipVerdict in_cone(const AugmentedCone& k, const HPMap& phi,
                                 const SolverOptions& opts = {}) {
  detail::check_cone_dims(k, phi, "in_cone");
  const int n = k.dimA * k.dimB;
  ConicSumProblem prob(n);
  if (k.include_sp1) {
    int s = prob.add_psd_block(n, op_identity(n));
    int s2 = prob.add_psd_block(n, Eigen::MatrixXd::Zero(herm_vec_dim(n), herm_vec_dim(n)));
    Eigen::MatrixXd gamma = op_matrix(n, n, [&](const Matrix& x) {
      return pt_raw(x, k.dimA, k.dimB);
    });
    prob.add_coupling(herm_vec_dim(n), {{s, gamma}, {s2, -op_identity(n)}});
  }
  for (const auto& g : k.generators) prob.add_ray_block(g.choi().mat(), op_identity(n));
  auto r = prob.solve(phi.choi().mat(), opts);
  bool exact = detail::small_dims(k.dimA, k.dimB) || !k.include_sp1;
  MembershipVerdict v = detail::conic_verdict(r, exact);
  v.meta += (v.meta.empty() ? "" : "; ") + std::string("k-membership-feasibility");
  return v;
}

/// Smallest right-mapping cone containing K: generated by K o CP, so
/// C_phi = S + sum_i (1_A (x) sigma_i)(P_i) with P_i PSD over M_A (x) M_A.
inline MembershipVerdict in_smallest_rmc(const AugmentedCone& k, const HPMap& phi,
                                         const SolverOptions& opts = {}) {
  detail::check_cone_dims(k, phi, "in_smallest_rmc");
  const int n = k.dimA * k.dimB;
  const int na = k.dimA * k.dimA;
  ConicSumProblem prob(n);
  if (k.include_sp1) {
    int s = prob.add_psd_block(n, op_identity(n));
    int s2 = prob.add_psd_block(n, Eigen::MatrixXd::Zero(herm_vec_dim(n), herm_vec_dim(n)));
    Eigen::MatrixXd gamma = op_matrix(n, n, [&](const Matrix& x) {
      return pt_raw(x, k.dimA, k.dimB);
    });
    prob.add_coupling(herm_vec_dim(n), {{s, gamma}, {s2, -op_identity(n)}});
  }
  for (const auto& g : k.generators) {
    Eigen::MatrixXd amp = op_matrix(na, n, [&](const Matrix& p) {
      BipartiteMatrix bp(k.dimA, k.dimA, p);
      return ampliate_left(g, k.dimA, bp).mat();
    });
    prob.add_psd_block(na, amp);
  }
  auto r = prob.solve(phi.choi().mat(), opts);
  MembershipVerdict v = detail::conic_verdict(r, detail::small_dims(k.dimA, k.dimB));
  v.meta += (v.meta.empty() ? "" : "; ") + std::string("smallest-rmc-feasibility");
  return v;
}

/// Smallest left-mapping cone: generated by CP o K, so
/// C_phi = S + sum_i (1_A (x) psi_i)(C_{sigma_i}) with C_{psi_i} PSD.
inline MembershipVerdict in_smallest_lmc(const AugmentedCone& k, const HPMap& phi,
                                         const SolverOptions& opts = {}) {
  detail::check_cone_dims(k, phi, "in_smallest_lmc");
  const int n = k.dimA * k.dimB;
  const int nb = k.dimB * k.dimB;
  ConicSumProblem prob(n);
  if (k.include_sp1) {
    int s = prob.add_psd_block(n, op_identity(n));
    int s2 = prob.add_psd_block(n, Eigen::MatrixXd::Zero(herm_vec_dim(n), herm_vec_dim(n)));
    Eigen::MatrixXd gamma = op_matrix(n, n, [&](const Matrix& x) {
      return pt_raw(x, k.dimA, k.dimB);
    });
    prob.add_coupling(herm_vec_dim(n), {{s, gamma}, {s2, -op_identity(n)}});
  }
  for (const auto& g : k.generators) {
    Eigen::MatrixXd amp = op_matrix(nb, n, [&](const Matrix& q) {
      HPMap psi = from_choi(k.dimB, k.dimB, q);
      return ampliate_left(psi, k.dimA, g.choi()).mat();
    });
    prob.add_psd_block(nb, amp);
  }
  auto r = prob.solve(phi.choi().mat(), opts);
  MembershipVerdict v = detail::conic_verdict(r, detail::small_dims(k.dimA, k.dimB));
  v.meta += (v.meta.empty() ? "" : "; ") + std::string("smallest-lmc-feasibility");
  return v;
}

// ---------------------------------------------------------------------------
// Cone handles shared by the harnesses and the CLI: either a builtin cone of
// maps, an augmented cone, or the left-mapping cone CP o {sigma}.

struct ConeSpec {
  enum class Kind { Builtin, Augmented, CpAfter };
  Kind kind = Kind::Builtin;
  ConeId id;                   // Builtin
  AugmentedCone aug;           // Augmented
  std::optional<HPMap> sigma;  // CpAfter: K = CP o {sigma}

  static ConeSpec builtin(ConeId c) {
    ConeSpec s;
    s.kind = Kind::Builtin;
    s.id = c;
    return s;
  }
  static ConeSpec augmented(AugmentedCone k) {
    ConeSpec s;
    s.kind = Kind::Augmented;
    s.aug = std::move(k);
    return s;
  }
  static ConeSpec cp_after(HPMap sigma) {
    ConeSpec s;
    s.kind = Kind::CpAfter;
    s.sigma = std::move(sigma);
    return s;
  }

  std::string name() const {
    switch (kind) {
      case Kind::Builtin: return id.name();
      case Kind::Augmented: return "augmented-cone";
      case Kind::CpAfter: return "cp-after-sigma";
    }
    return "?";
  }
};

/// K° membership for a cone handle.
inline MembershipVerdict cone_dual_member(const ConeSpec& k, const HPMap& phi,
                                          const SolverOptions& opts = {}) {
  switch (k.kind) {
    case ConeSpec::Kind::Builtin: return member_of(dual_cone(k.id), phi, opts);
    case ConeSpec::Kind::Augmented: return in_dual(k.aug, phi, opts);
    case ConeSpec::Kind::CpAfter:
      // (CP o {sigma})° = {phi : phi o sigma^* in CP}
      return is_cp(compose(phi, adjoint(*k.sigma)), opts);
  }
  throw std::logic_error("cone_dual_member: bad kind");
}

}  // namespace mapcones
