#include "mapcones/cones.hpp"
#include "mapcones/harness.hpp"
#include "mapcones/sampling.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace mapcones;

TEST_CASE("in_dual of the worked cone") {
  SolverOptions opts;
  const AugmentedCone k = example_cone();
  SECTION("bullet thresholds over a parameter sweep") {
    for (double a : {0.1, 0.4, 0.8, 1.3, 1.9})
      for (double d : {0.1, 0.6, 1.1, 1.7}) {
        bool closed = std::sqrt(a * d) + 1.0 >= 1.0 && a + 1.0 + d >= 2.0;
        auto v = in_dual(k, phi_abcd(a, 1, 1, d), opts);
        bool member = v.is_member() || std::abs(v.gap) <= 1e-9;
        CHECK(member == closed);
      }
  }
  SECTION("pairing with the generator is nonnegative on dual members") {
    Rng rng(3);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (int t = 0; t < 30; ++t) {
      HPMap probe = phi_abcd(u(rng), u(rng), u(rng), u(rng));
      if (in_dual(k, probe, opts).is_member())
        CHECK(map_pairing(probe, sigma_map()) >= -1e-9);
    }
  }
  SECTION("dropping the SP1 part drops the positivity clause") {
    AugmentedCone rays_only = k;
    rays_only.include_sp1 = false;
    // negative multiple of a non-positive map can still pair correctly
    HPMap m = phi_abcd(0.1, 0.1, 0.1, 2.0);  // not positive, but a+c+d-2 = 0.2
    CHECK(in_dual(rays_only, m, opts).is_member());
    CHECK(in_dual(k, m, opts).is_non_member());
  }
  SECTION("dimension mismatch") {
    CHECK_THROWS_AS(in_dual(k, identity_map(3), opts), DimensionError);
  }
}

TEST_CASE("one-sided duals of the worked cone") {
  SolverOptions opts;
  const AugmentedCone k = example_cone();
  SECTION("the counterexample pair splits the two sides") {
    HPMap left_only = phi_abcd(1.0 / 3.0, 1, 1, 1);
    HPMap right_only = phi_abcd(1, 1, 1, 1.0 / 3.0);
    CHECK(in_ldual(k, left_only, opts).is_member());
    CHECK(in_rdual(k, left_only, opts).is_non_member());
    CHECK(in_rdual(k, right_only, opts).is_member());
    CHECK(in_ldual(k, right_only, opts).is_non_member());
    // both sit inside the plain dual
    CHECK(in_dual(k, left_only, opts).is_member());
    CHECK(in_dual(k, right_only, opts).is_member());
  }
  SECTION("closed forms a(c+d) >= 1 and (a+c)d >= 1 on a sweep") {
    for (double a : {0.2, 0.5, 0.9, 1.4})
      for (double d : {0.3, 0.8, 1.2, 1.8}) {
        bool p1 = std::sqrt(a * d) + 1.0 >= 1.0;
        auto vr = in_rdual(k, phi_abcd(a, 1, 1, d), opts);
        auto vl = in_ldual(k, phi_abcd(a, 1, 1, d), opts);
        bool want_r = p1 && a * (1.0 + d) >= 1.0;
        bool want_l = p1 && (a + 1.0) * d >= 1.0;
        CHECK((vr.is_member() || std::abs(vr.gap) <= 1e-9) == want_r);
        CHECK((vl.is_member() || std::abs(vl.gap) <= 1e-9) == want_l);
      }
  }
  SECTION("one-sided dual members lie in the dual (sandwich)") {
    Rng rng(7);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (int t = 0; t < 40; ++t) {
      HPMap probe = phi_abcd(u(rng), u(rng), u(rng), u(rng));
      if (in_rdual(k, probe, opts).is_member()) CHECK(in_dual(k, probe, opts).is_member());
      if (in_ldual(k, probe, opts).is_member()) CHECK(in_dual(k, probe, opts).is_member());
    }
  }
}

TEST_CASE("membership in K by conic feasibility") {
  SolverOptions opts;
  const AugmentedCone k = example_cone();
  SECTION("the generator itself is a member") {
    auto v = in_cone(k, sigma_map(), opts);
    CHECK(v.is_member());
  }
  SECTION("SP1 element plus a generator multiple is a member with certificate") {
    Rng rng(11);
    HPMap sp = sample_sp1_map(2, 2, 3, rng);
    Matrix target = sp.choi().mat() + 0.35 * sigma_map().choi().mat();
    auto v = in_cone(k, from_choi(2, 2, target), opts);
    REQUIRE(v.is_member());
    REQUIRE(v.certificate.kind == "conic-decomposition");
    // reconstruction: S + S' coupling + ray blocks reproduce the target
    // (block order: S, S-lift, one ray per generator)
    const Matrix& s = v.certificate.parts[0];
    const Matrix& ray = v.certificate.parts[2];
    double scale = 1.0 + target.norm();
    CHECK((s + ray - target).norm() < 1e-6 * scale);
    CHECK(is_psd(s, 1e-7));
    CHECK(is_psd(pt_raw(s, 2, 2), 1e-7));
  }
  SECTION("tau is not in K and the gap is macroscopic") {
    auto v = in_cone(k, tau_map(), opts);
    CHECK(v.is_non_member());
    CHECK(std::abs(v.gap) > 1e-3);
  }
  SECTION("the zero map is a member") {
    CHECK(in_cone(k, from_choi(2, 2, Matrix(Matrix::Zero(4, 4))), opts).is_member());
  }
}

TEST_CASE("smallest one-sided mapping cones") {
  SolverOptions opts;
  const AugmentedCone k = example_cone();
  SECTION("sigma composed with a random CP map is in the smallest rmc") {
    Rng rng(13);
    for (int t = 0; t < 4; ++t) {
      HPMap cp = sample_cp_map(2, 2, 2, rng);
      auto v = in_smallest_rmc(k, compose(sigma_map(), cp), opts);
      CHECK(v.is_member());
    }
  }
  SECTION("a CP map composed with sigma is in the smallest lmc") {
    Rng rng(17);
    for (int t = 0; t < 4; ++t) {
      HPMap cp = sample_cp_map(2, 2, 2, rng);
      auto v = in_smallest_lmc(k, compose(cp, sigma_map()), opts);
      CHECK(v.is_member());
    }
  }
  SECTION("SP1 elements are members of both") {
    Rng rng(19);
    HPMap sp = sample_sp1_map(2, 2, 2, rng);
    CHECK(in_smallest_rmc(k, sp, opts).is_member());
    CHECK(in_smallest_lmc(k, sp, opts).is_member());
  }
  SECTION("the zero map is a member") {
    HPMap z = from_choi(2, 2, Matrix(Matrix::Zero(4, 4)));
    CHECK(in_smallest_rmc(k, z, opts).is_member());
  }
}

TEST_CASE("one-sided equivalence harness") {
  SolverOptions opts;
  SECTION("CP passes the full battery") {
    auto rep = check_one_sided_equivalences(ConeSpec::builtin(ConeId::cp()), 40, 5, opts);
    for (const auto& c : rep.checks) {
      INFO(c.name);
      CHECK(c.passed);
    }
    CHECK(rep.failures() == 0);
  }
  SECTION("the worked cone reports exactly the two strict non-inclusions") {
    auto rep =
        check_one_sided_equivalences(ConeSpec::augmented(example_cone()), 30, 5, opts);
    int failures = 0;
    for (const auto& c : rep.checks) {
      if (!c.passed) {
        ++failures;
        CHECK(c.expected_to_fail);
        REQUIRE(c.violations.size() == 1);
      } else {
        CHECK_FALSE(c.expected_to_fail);
      }
    }
    CHECK(failures == 2);
  }
  SECTION("the dual of CP o {e11 (x) e11} contains a non-positive map") {
    Matrix c = Matrix::Zero(4, 4);
    c(0, 0) = 1.0;
    auto rep =
        check_one_sided_equivalences(ConeSpec::cp_after(from_choi(2, 2, c)), 1, 5, opts);
    CHECK(rep.failures() == 0);
  }
}

TEST_CASE("ampliation crosscheck") {
  SolverOptions opts;
  const AugmentedCone k = example_cone();
  SECTION("right-dual member: all five predicates hold") {
    auto rep = ampliation_crosscheck(k, phi_abcd(1, 1, 1, 1), "right", 12, 5, opts);
    CHECK(rep.agree);
    for (int v : rep.verdicts) CHECK(v == 1);
  }
  SECTION("left-dual member: all five predicates hold") {
    auto rep = ampliation_crosscheck(k, phi_abcd(1.0 / 3.0, 1, 1, 1), "left", 12, 5, opts);
    CHECK(rep.agree);
    for (int v : rep.verdicts) CHECK(v == 1);
  }
  SECTION("non-member of K^>: the generator ampliation predicate fails too") {
    auto rep = ampliation_crosscheck(k, phi_abcd(1.0 / 3.0, 1, 1, 1), "right", 12, 5, opts);
    CHECK(rep.verdicts[0] == 0);  // (i) in_rdual
    CHECK(rep.verdicts[3] == 0);  // (iv) generator ampliations PSD
  }
  SECTION("bad side argument") {
    CHECK_THROWS_AS(ampliation_crosscheck(k, sigma_map(), "up", 4, 5, opts),
                    std::invalid_argument);
  }
}

TEST_CASE("dual membership for builtin cone handles") {
  SolverOptions opts;
  // dual of PPT is DEC: the transpose map is decomposable, so it must pass
  CHECK(cone_dual_member(ConeSpec::builtin(ConeId::ppt()), transpose_map(2), opts)
            .is_member());
  // dual of CP is CP
  CHECK(cone_dual_member(ConeSpec::builtin(ConeId::cp()), sigma_map(), opts).is_member());
  CHECK(cone_dual_member(ConeSpec::builtin(ConeId::cp()), transpose_map(2), opts)
            .is_non_member());
}
