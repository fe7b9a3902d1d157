#pragma once

// Sampling harnesses for the one-sided mapping-cone characterizations.
// These are falsifiers: they search for violations of the claimed
// implications on random samples and report any witnesses found; an empty
// violation list corroborates, it does not prove.

#include "mapcones/cones.hpp"
#include "mapcones/pptsquare.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace mapcones {

struct CheckResult {
  std::string name;
  int samples = 0;
  bool passed = true;
  bool expected_to_fail = false;  // known strict non-inclusions
  std::vector<std::string> violations;
};

struct HarnessReport {
  std::string cone;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  int failures() const {
    int n = 0;
    for (const auto& c : checks)
      if (!c.passed) ++n;
    return n;
  }
};

namespace detail {

inline std::string brief(const HPMap& m) {
  std::ostringstream os;
  os << "map(" << m.dimA() << "->" << m.dimB() << ", hash "
     << std::hex << matrix_hash(m.choi().mat()) << std::dec << ")";
  return os.str();
}

/// Samples an element of a builtin cone.
inline HPMap sample_from(const ConeId& id, int dA, int dB, Rng& rng, std::uint64_t seed) {
  switch (id.tag) {
    case ConeId::Tag::CP: return sample_cp_map(dA, dB, 2 + static_cast<int>(rng() % 2), rng);
    case ConeId::Tag::CCP: return compose_transpose(sample_cp_map(dA, dB, 2, rng));
    case ConeId::Tag::PPT: return sample_ppt_map(dA, dB, mix_seed(seed, rng()));
    case ConeId::Tag::DEC: {
      HPMap cp = sample_cp_map(dA, dB, 2, rng);
      HPMap ccp = compose_transpose(sample_cp_map(dA, dB, 2, rng));
      return from_choi(dA, dB, Matrix(0.5 * cp.choi().mat() + 0.5 * ccp.choi().mat()));
    }
    case ConeId::Tag::SP: {
      // conic combination of Ad_V with rank(V) <= k
      std::uniform_real_distribution<double> u(0.2, 1.0);
      Matrix acc = Matrix::Zero(dA * dB, dA * dB);
      for (int t = 0; t < 3; ++t) {
        Matrix v = Matrix::Zero(dA, dB);
        for (int r = 0; r < id.k; ++r)
          v += random_unit_vector(dA, rng) * random_unit_vector(dB, rng).adjoint();
        acc += u(rng) * choi_of_ad(v).mat();
      }
      return from_choi(dA, dB, Matrix(acc / acc.trace().real()));
    }
    case ConeId::Tag::P: {
      if (dA != 2 || dB != 2)
        throw std::invalid_argument("sample_from(P_k): only 2x2 supported");
      return sample_positive_map_2x2(rng);
    }
  }
  throw std::logic_error("sample_from: bad id");
}

}  // namespace detail

/// Numerical check battery for the conditions equivalent to one-sided
/// stability.  For a builtin mapping cone (claimed stable on both sides) all
/// checks must come out clean; for the augmented example cone the harness
/// confirms the two strict non-inclusions via the canonical witnesses.
inline HarnessReport check_one_sided_equivalences(const ConeSpec& spec, int samples,
                                                  std::uint64_t seed,
                                                  const SolverOptions& opts = {}) {
  HarnessReport rep;
  rep.cone = spec.name();
  rep.seed = seed;

  if (spec.kind == ConeSpec::Kind::Builtin) {
    const ConeId id = spec.id;
    const ConeId dual = dual_cone(id);
    const int dA = 2, dB = 2;
    CheckResult right{"right-stability: K o CP in K", samples};
    CheckResult left{"left-stability: CP o K in K", samples};
    CheckResult dual_right{"adjoint composition: K* o K° in CP", samples};
    CheckResult dual_left{"adjoint composition: K° o K* in CP", samples};
    CheckResult collapse{"probe agreement: dual == right-dual == left-dual", samples};
    for (int t = 0; t < samples; ++t) {
      Rng rng(mix_seed(seed, t));
      HPMap psi = (t == 0) ? identity_map(dA)
                           : detail::sample_from(id, dA, dB, rng, mix_seed(seed, t));
      HPMap cp_a = sample_cp_map(dA, dA, 2, rng);
      HPMap cp_b = sample_cp_map(dB, dB, 2, rng);
      HPMap chi = (t == 0) ? identity_map(dA)
                           : detail::sample_from(dual, dA, dB, rng, mix_seed(seed, 77 + t));

      if (!member_of(id, compose(psi, cp_a), opts).is_member())
        right.violations.push_back("psi o cp left the cone: " + detail::brief(psi));
      if (!member_of(id, compose(cp_b, psi), opts).is_member())
        left.violations.push_back("cp o psi left the cone: " + detail::brief(psi));
      if (!is_cp(compose(adjoint(psi), chi), opts).is_member())
        dual_right.violations.push_back("adj(psi) o chi not CP: " + detail::brief(psi) +
                                        ", " + detail::brief(chi));
      if (!is_cp(compose(chi, adjoint(psi)), opts).is_member())
        dual_left.violations.push_back("chi o adj(psi) not CP: " + detail::brief(psi) +
                                       ", " + detail::brief(chi));
      // random Hermitian-preserving probe: dual membership must agree with
      // the sampled one-sided composition predicates
      Rng prng(mix_seed(seed, 5000 + t));
      HPMap probe = from_choi(dA, dB, random_hermitian(dA * dB, prng));
      bool in_dual_cone = member_of(dual, probe, opts).is_member();
      bool r_ok = is_cp(compose(adjoint(psi), probe), opts).is_member();
      bool l_ok = is_cp(compose(probe, adjoint(psi)), opts).is_member();
      // membership must imply every sampled composition lands in CP
      if (in_dual_cone && (!r_ok || !l_ok))
        collapse.violations.push_back("dual member failed a composition probe: " +
                                      detail::brief(probe));
    }
    for (auto* c : {&right, &left, &dual_right, &dual_left, &collapse}) {
      c->passed = c->violations.empty();
      rep.checks.push_back(*c);
    }
    return rep;
  }

  if (spec.kind == ConeSpec::Kind::CpAfter) {
    // K = CP o {sigma} is a left-mapping cone whose dual may contain a map
    // that is not positive.  Exhibit one for sigma with Choi e11 (x) e11.
    const HPMap& sigma = *spec.sigma;
    const int dA = sigma.dimA(), dB = sigma.dimB();
    CheckResult c{"dual of CP o {sigma} contains a non-positive map", 1};
    Matrix w = Matrix::Zero(dA * dB, dA * dB);
    w.block(0, 0, dB, dB) = Matrix::Identity(dB, dB);
    w.block((dA - 1) * dB + dB - 1, (dA - 1) * dB + dB - 1, 1, 1) =
        -Matrix::Identity(1, 1);
    HPMap candidate = from_choi(dA, dB, w);
    bool in_dual = cone_dual_member(spec, candidate, opts).is_member();
    bool positive = is_positive_k(candidate, 1, opts).is_member();
    if (!(in_dual && !positive))
      c.violations.push_back("exhibit failed: in_dual=" + std::to_string(in_dual) +
                             " positive=" + std::to_string(positive));
    c.passed = c.violations.empty();
    rep.checks.push_back(c);
    return rep;
  }

  // Augmented cone: sandwich checks on samples plus the canonical
  // stability counterexamples for the worked 2x2 cone.
  const AugmentedCone& k = spec.aug;
  CheckResult sand_r{"sandwich: K^> subset of K°", samples};
  CheckResult sand_l{"sandwich: K^< subset of K°", samples};
  for (int t = 0; t < samples; ++t) {
    Rng rng(mix_seed(seed, 300 + t));
    std::uniform_real_distribution<double> u(0.0, 2.0);
    HPMap probe = (t % 2 == 0 && k.dimA == 2 && k.dimB == 2)
                      ? phi_abcd(u(rng), u(rng), u(rng), u(rng))
                      : from_choi(k.dimA, k.dimB, random_hermitian(k.dimA * k.dimB, rng));
    if (in_rdual(k, probe, opts).is_member() && in_dual(k, probe, opts).is_non_member())
      sand_r.violations.push_back("rdual member outside dual: " + detail::brief(probe));
    if (in_ldual(k, probe, opts).is_member() && in_dual(k, probe, opts).is_non_member())
      sand_l.violations.push_back("ldual member outside dual: " + detail::brief(probe));
  }
  sand_r.passed = sand_r.violations.empty();
  sand_l.passed = sand_l.violations.empty();
  rep.checks.push_back(sand_r);
  rep.checks.push_back(sand_l);

  if (k.dimA == 2 && k.dimB == 2 && !k.generators.empty()) {
    // canonical witnesses of the failure of one-sided stability
    HPMap w_r = phi_abcd(1.0 / 3.0, 1, 1, 1);  // in K° and K^<, not in K^>
    HPMap w_l = phi_abcd(1, 1, 1, 1.0 / 3.0);  // in K° and K^>, not in K^<
    CheckResult right{"right-stability: K° subset of K^>", 1};
    right.expected_to_fail = true;
    if (in_dual(k, w_r, opts).is_member() && in_rdual(k, w_r, opts).is_non_member() &&
        in_ldual(k, w_r, opts).is_member())
      right.violations.push_back("phi_[1/3,1,1,1] in K° and K^< but not in K^>");
    right.passed = right.violations.empty();
    CheckResult left{"left-stability: K° subset of K^<", 1};
    left.expected_to_fail = true;
    if (in_dual(k, w_l, opts).is_member() && in_ldual(k, w_l, opts).is_non_member() &&
        in_rdual(k, w_l, opts).is_member())
      left.violations.push_back("phi_[1,1,1,1/3] in K° and K^> but not in K^<");
    left.passed = left.violations.empty();
    rep.checks.push_back(right);
    rep.checks.push_back(left);
  }
  return rep;
}

struct AmpliationReport {
  std::string side;  // "right" or "left"
  bool agree = true;
  std::vector<std::string> predicates;     // description per predicate
  std::vector<int> verdicts;               // 1 member / 0 not / -1 unknown
  std::vector<std::string> disagreements;
};

/// Numerically tests the five equivalent ampliation characterizations of
/// K^> (right side) or K^< (left side) for an augmented cone, with the
/// universally quantified clauses sampled.
inline AmpliationReport ampliation_crosscheck(const AugmentedCone& k, const HPMap& phi,
                                              const std::string& side, int samples,
                                              std::uint64_t seed,
                                              const SolverOptions& opts = {}) {
  detail::check_cone_dims(k, phi, "ampliation_crosscheck");
  const int dA = k.dimA, dB = k.dimB;
  const bool right = side == "right";
  if (!right && side != "left")
    throw std::invalid_argument("ampliation_crosscheck: side must be left|right");

  AmpliationReport rep;
  rep.side = side;
  auto push = [&rep](const std::string& name, int verdict) {
    rep.predicates.push_back(name);
    rep.verdicts.push_back(verdict);
  };
  auto as_int = [](const MembershipVerdict& v) {
    return v.is_member() ? 1 : (v.status == Status::Unknown ? -1 : 0);
  };

  // (i) the one-sided dual itself
  push(right ? "phi in K^>" : "phi in K^<",
       as_int(right ? in_rdual(k, phi, opts) : in_ldual(k, phi, opts)));

  // (ii) ampliations of sampled CP Choi matrices stay in C_{K°}
  {
    int verdict = 1;
    for (int t = 0; t < samples && verdict == 1; ++t) {
      Rng rng(mix_seed(seed, t));
      if (right) {
        HPMap psi = sample_cp_map(dA, dA, 2, rng);
        BipartiteMatrix img = ampliate_left(phi, dA, psi.choi());
        auto v = in_dual(k, HPMap(img), opts);
        verdict = std::min(verdict, as_int(v));
      } else {
        HPMap psi = sample_cp_map(dB, dB, 2, rng);
        BipartiteMatrix img = ampliate_right(adjoint(phi), dB, psi.choi());
        // (phi* (x) 1_B)(C_psi) lives in M_A (x) M_B
        auto v = in_dual(k, HPMap(img), opts);
        verdict = std::min(verdict, as_int(v));
      }
    }
    push("sampled CP ampliations land in C_{K°}", verdict);
  }

  // (iii) flipped variant through the adjoint
  {
    int verdict = 1;
    for (int t = 0; t < samples && verdict == 1; ++t) {
      Rng rng(mix_seed(seed, 100 + t));
      if (right) {
        HPMap psi = sample_cp_map(dA, dA, 2, rng);
        BipartiteMatrix img = ampliate_left(psi, dB, adjoint(phi).choi());
        // member of C_{K*°} iff the flipped map lies in K°
        auto v = in_dual(k, adjoint(HPMap(img)), opts);
        verdict = std::min(verdict, as_int(v));
      } else {
        HPMap psi = sample_cp_map(dB, dB, 2, rng);
        BipartiteMatrix img = ampliate_right(psi, dA, adjoint(phi).choi());
        auto v = in_dual(k, adjoint(HPMap(img)), opts);
        verdict = std::min(verdict, as_int(v));
      }
    }
    push("sampled CP ampliations of C_{phi*} land in C_{K*°}", verdict);
  }

  // (iv) generator ampliations of C_phi are positive matrices
  {
    int verdict = 1;
    for (const auto& g : k.generators) {
      if (right) {
        BipartiteMatrix img = ampliate_left(adjoint(g), dA, phi.choi());
        if (!is_psd(img.mat(), opts.tol)) verdict = 0;
      } else {
        BipartiteMatrix img = ampliate_right(g, dB, phi.choi());
        if (!is_psd(img.mat(), opts.tol)) verdict = 0;
      }
    }
    if (k.include_sp1 && verdict == 1) {
      // rank-one Kraus elements of SP_1 as extra generators
      for (int t = 0; t < samples && verdict == 1; ++t) {
        Rng rng(mix_seed(seed, 200 + t));
        HPMap s = sample_sp1_map(dA, dB, 2, rng);
        BipartiteMatrix img = right ? ampliate_left(adjoint(s), dA, phi.choi())
                                    : ampliate_right(s, dB, phi.choi());
        if (!is_psd(img.mat(), opts.tol)) verdict = 0;
      }
    }
    push("generator ampliations of C_phi are PSD", verdict);
  }

  // (v) phi-side ampliations of generator Choi matrices are positive
  {
    int verdict = 1;
    for (const auto& g : k.generators) {
      BipartiteMatrix img = right ? ampliate_left(adjoint(phi), dA, g.choi())
                                  : ampliate_right(phi, dB, g.choi());
      if (!is_psd(img.mat(), opts.tol)) verdict = 0;
    }
    if (k.include_sp1 && verdict == 1) {
      for (int t = 0; t < samples && verdict == 1; ++t) {
        Rng rng(mix_seed(seed, 400 + t));
        HPMap s = sample_sp1_map(dA, dB, 2, rng);
        BipartiteMatrix img = right ? ampliate_left(adjoint(phi), dA, s.choi())
                                    : ampliate_right(phi, dB, s.choi());
        if (!is_psd(img.mat(), opts.tol)) verdict = 0;
      }
    }
    push("phi ampliations of generator Chois are PSD", verdict);
  }

  int reference = rep.verdicts[0];
  for (std::size_t i = 0; i < rep.verdicts.size(); ++i) {
    if (rep.verdicts[i] == -1) continue;  // unknown never counts as a clash
    if (reference == -1) reference = rep.verdicts[i];
    if (rep.verdicts[i] != reference) {
      rep.agree = false;
      rep.disagreements.push_back(rep.predicates[i]);
    }
  }
  return rep;
}

}  // namespace mapcones
