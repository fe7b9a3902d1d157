#pragma once

// Experiment harness around the PPT-square question: sample PPT maps,
// compose, test entanglement breaking; the block-Schur form of composition;
// samplers for the seven equivalent inclusion statements.

#include "mapcones/cones.hpp"
#include "mapcones/membership.hpp"
#include "mapcones/projections.hpp"
#include "mapcones/sampling.hpp"

#include <string>
#include <vector>

namespace mapcones {

/// With X = sum e_kl (x) x_kl in M_B (x) M_A and Y = sum e_kl (x) y_kl in
/// M_B (x) M_C, returns sum_kl x_kl (x) y_kl in M_A (x) M_C.  Applied to
/// (flip(C_phi), C_psi) this realizes the composition Choi matrix.
inline BipartiteMatrix block_schur_sum(const BipartiteMatrix& x, const BipartiteMatrix& y) {
  if (x.dimA() != y.dimA())
    throw DimensionError("block_schur_sum: leading block dimensions differ");
  const int dB = x.dimA(), dA = x.dimB(), dC = y.dimB();
  Matrix acc = Matrix::Zero(dA * dC, dA * dC);
  for (int k = 0; k < dB; ++k)
    for (int l = 0; l < dB; ++l)
      acc += kron(Matrix(x.block(k, l)), Matrix(y.block(k, l)));
  return BipartiteMatrix(dA, dC, acc);
}

/// Random PPT map: Dykstra projection of a GUE matrix onto the PPT
/// spectrahedron, trace-normalized.  Resamples on projection failure or a
/// vanishing trace.  Deterministic under the seed.
inline HPMap sample_ppt_map(int dA, int dB, std::uint64_t seed) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    Rng rng(mix_seed(seed, attempt));
    Matrix h = random_hermitian(dA * dB, rng);
    auto proj = project_ppt(h, dA, dB, 1e-12, 6000);
    if (!proj.converged) continue;
    double tr = proj.point.trace().real();
    if (tr < 1e-3 * (1.0 + proj.point.norm())) continue;
    return from_choi(dA, dB, Matrix(proj.point / tr));
  }
  throw std::runtime_error("sample_ppt_map: resample budget exhausted");
}

/// Random CP map with the given number of Kraus terms, trace-normalized Choi.
inline HPMap sample_cp_map(int dA, int dB, int terms, Rng& rng) {
  std::vector<Matrix> ks;
  for (int t = 0; t < terms; ++t) ks.push_back(random_ginibre(dA, dB, rng) / std::sqrt(2.0 * dA));
  HPMap m = from_kraus(ks);
  double tr = m.choi().mat().trace().real();
  return from_choi(dA, dB, Matrix(m.choi().mat() / tr));
}

/// Random entanglement-breaking map: conic combination of rank-one Ad_V.
inline HPMap sample_sp1_map(int dA, int dB, int terms, Rng& rng) {
  std::uniform_real_distribution<double> u(0.2, 1.0);
  Matrix acc = Matrix::Zero(dA * dB, dA * dB);
  for (int t = 0; t < terms; ++t) {
    Matrix v = random_unit_vector(dA, rng) * random_unit_vector(dB, rng).adjoint();
    acc += u(rng) * choi_of_ad(v).mat();
  }
  return from_choi(dA, dB, Matrix(acc / acc.trace().real()));
}

/// Random CP map that is not PPT (clear margin), by rejection.
inline HPMap sample_nonppt_cp_map(int dA, int dB, std::uint64_t seed) {
  for (int attempt = 0; attempt < 512; ++attempt) {
    Rng rng(mix_seed(seed, 9000 + attempt));
    int terms = 1 + static_cast<int>(rng() % 3);
    HPMap m = sample_cp_map(dA, dB, terms, rng);
    auto es = eig_herm(partial_transpose(m.choi()).mat());
    double lo = es.eigenvalues().minCoeff();
    double scale = 1.0 + es.eigenvalues().cwiseAbs().maxCoeff();
    if (lo < -1e-3 * scale) return m;
  }
  throw std::runtime_error("sample_nonppt_cp_map: rejection budget exhausted");
}

/// Random positive (not necessarily CP) map on M_2: a verified member of the
/// phi_[a,b,c,d] family conjugated by Haar rotations on both sides.
inline HPMap sample_positive_map_2x2(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0);
  double a, b, c, d;
  do {
    a = u(rng); b = u(rng); c = u(rng); d = u(rng);
  } while (std::sqrt(a * d) + std::sqrt(b * c) < 1.05);
  HPMap base = phi_abcd(a, b, c, d);
  Matrix uu = haar_unitary(2, rng), vv = haar_unitary(2, rng);
  // Ad_U o base o Ad_V, both conjugations completely positive
  HPMap adu = from_kraus({uu}), adv = from_kraus({vv});
  return compose(adu, compose(base, adv));
}

struct TrialRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  int dimA = 0, dimB = 0;
  std::uint64_t phi_hash = 0, psi_hash = 0;
  MembershipVerdict ppt;  // of the composite
  MembershipVerdict eb;   // SP_1 verdict of the composite
  std::string flag;       // "ok" | "unknown" | "candidate-counterexample"
};

/// Composes two (verified) PPT maps and records PPT / entanglement-breaking
/// verdicts of the composite.  A certified EB refutation is flagged only
/// after the witness pairing is re-evaluated below -100*tol.
inline TrialRecord ppt_square_trial(const HPMap& phi, const HPMap& psi,
                                    const SolverOptions& opts = {}) {
  if (!is_ppt_map(phi, opts).is_member() || !is_ppt_map(psi, opts).is_member())
    throw std::invalid_argument("ppt_square_trial: inputs must be PPT maps");
  TrialRecord rec;
  rec.dimA = phi.dimA();
  rec.dimB = psi.dimB();
  rec.phi_hash = matrix_hash(phi.choi().mat());
  rec.psi_hash = matrix_hash(psi.choi().mat());
  HPMap comp = compose(psi, phi);
  rec.ppt = is_ppt_map(comp, opts);
  rec.eb = is_superpositive_k(comp, 1, opts);
  rec.flag = "ok";
  if (rec.eb.status == Status::Unknown) rec.flag = "unknown";
  if (rec.eb.status == Status::NonMember) {
    rec.flag = "unknown";  // demoted unless the witness re-verifies
    if (rec.eb.certificate.kind == "witness-map") {
      double scale = 1.0 + comp.choi().mat().norm();
      double margin = pairing(comp.choi().mat(), rec.eb.certificate.mat_a);
      if (margin < -100.0 * opts.tol * scale) rec.flag = "candidate-counterexample";
    }
  }
  return rec;
}

struct SamplerReport {
  std::string statement;
  int trials = 0;
  int passes = 0;
  int unknowns = 0;
  int failures = 0;
  std::vector<std::string> witnesses;  // descriptions of failing tuples
};

/// Samples tuples for one of the seven equivalent inclusion statements and
/// tests the stated inclusion with the matching verdict op.  A sampling
/// falsifier: it can refute, corroborate, or report unknowns; it proves
/// nothing.
inline SamplerReport equivalence_sampler(const std::string& statement, int trials, int dA,
                                         int dB, std::uint64_t seed,
                                         const SolverOptions& opts = {}) {
  SamplerReport rep;
  rep.statement = statement;
  rep.trials = trials;
  const bool need_pos = statement == "ii" || statement == "iii" || statement == "vi" ||
                        statement == "vii";
  if (need_pos && (dA != 2 || dB != 2))
    throw std::invalid_argument(
        "equivalence_sampler: positive-map statements are sampled at 2x2 only");

  for (int t = 0; t < trials; ++t) {
    std::uint64_t s = mix_seed(seed, t);
    Rng rng(s);
    HPMap p1 = sample_ppt_map(dA, dB, mix_seed(s, 1));
    HPMap p2 = sample_ppt_map(dA, dB, mix_seed(s, 2));
    MembershipVerdict v;
    std::string desc;
    if (statement == "i") {
      v = is_superpositive_k(compose(p2, p1), 1, opts);
      desc = "SP1(ppt o ppt)";
    } else if (statement == "ii") {
      HPMap pos = sample_positive_map_2x2(rng);
      v = is_decomposable(compose(p1, pos), opts);
      desc = "DEC(ppt o pos)";
    } else if (statement == "iii") {
      HPMap pos = sample_positive_map_2x2(rng);
      v = is_decomposable(compose(pos, p1), opts);
      desc = "DEC(pos o ppt)";
    } else if (statement == "iv") {
      HPMap cp = sample_cp_map(dA, dB, 2, rng);
      v = is_superpositive_k(compose(p2, compose(cp, p1)), 1, opts);
      desc = "SP1(ppt o cp o ppt)";
    } else if (statement == "v") {
      HPMap cp = sample_cp_map(dA, dB, 2, rng);
      HPMap ccp = compose_transpose(sample_cp_map(dA, dB, 2, rng));
      HPMap dec = from_choi(dA, dB, Matrix(0.5 * cp.choi().mat() + 0.5 * ccp.choi().mat()));
      v = is_superpositive_k(compose(p2, compose(dec, p1)), 1, opts);
      desc = "SP1(ppt o dec o ppt)";
    } else if (statement == "vi") {
      HPMap pos = sample_positive_map_2x2(rng);
      v = is_cp(compose(p2, compose(pos, p1)), opts);
      desc = "CP(ppt o pos o ppt)";
    } else if (statement == "vii") {
      HPMap pos = sample_positive_map_2x2(rng);
      v = is_ppt_map(compose(p2, compose(pos, p1)), opts);
      desc = "PPT(ppt o pos o ppt)";
    } else {
      throw std::invalid_argument("equivalence_sampler: unknown statement " + statement);
    }
    if (v.is_member()) {
      ++rep.passes;
    } else if (v.status == Status::Unknown) {
      ++rep.unknowns;
    } else {
      ++rep.failures;
      rep.witnesses.push_back(desc + " failed at trial " + std::to_string(t) +
                              " (gap " + std::to_string(v.gap) + ")");
    }
  }
  return rep;
}

}  // namespace mapcones
