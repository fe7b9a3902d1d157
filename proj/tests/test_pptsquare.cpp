#include "mapcones/pptsquare.hpp"
#include "mapcones/sampling.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace mapcones;

namespace {
Matrix e(int i, int j, int d = 2) { return matrix_unit(i, j, d); }
}

TEST_CASE("block_schur_sum") {
  Rng rng(3);
  SECTION("single-block case gives the plain tensor product") {
    Matrix x = random_hermitian(2, rng), y = random_hermitian(3, rng);
    BipartiteMatrix xx = kron(e(0, 0), x, 2, 2);
    BipartiteMatrix yy = kron(e(0, 0), y, 2, 3);
    CHECK((block_schur_sum(xx, yy).mat() - kron(x, y)).norm() < 1e-13);
  }
  SECTION("disjoint block supports sum to zero") {
    Matrix x = random_hermitian(2, rng), y = random_hermitian(2, rng);
    BipartiteMatrix xx = kron(e(0, 0), x, 2, 2);
    BipartiteMatrix yy = kron(e(1, 1), y, 2, 2);
    CHECK(block_schur_sum(xx, yy).mat().norm() == 0.0);
  }
  SECTION("realizes the composition Choi matrix on random pairs") {
    for (int t = 0; t < 25; ++t) {
      HPMap phi = from_choi(2, 3, random_hermitian(6, rng));
      HPMap psi = from_choi(3, 2, random_hermitian(6, rng));
      CHECK((block_schur_sum(flip(phi.choi()), psi.choi()).mat() -
             compose(psi, phi).choi().mat())
                .norm() < 1e-10);
    }
  }
  SECTION("mismatched leading dimension") {
    BipartiteMatrix a(2, 2, random_hermitian(4, rng));
    BipartiteMatrix b(3, 2, random_hermitian(6, rng));
    CHECK_THROWS_AS(block_schur_sum(a, b), DimensionError);
  }
}

TEST_CASE("sample_ppt_map") {
  SolverOptions opts;
  SECTION("output is PPT with unit trace") {
    for (std::uint64_t s : {1ull, 2ull, 3ull}) {
      HPMap m = sample_ppt_map(2, 3, s);
      CHECK(is_ppt_map(m, opts).is_member());
      CHECK(m.choi().mat().trace().real() == Catch::Approx(1.0).margin(1e-10));
    }
  }
  SECTION("fixed seed reproduces the Choi hash") {
    CHECK(matrix_hash(sample_ppt_map(2, 2, 99).choi().mat()) ==
          matrix_hash(sample_ppt_map(2, 2, 99).choi().mat()));
    CHECK(matrix_hash(sample_ppt_map(2, 2, 99).choi().mat()) !=
          matrix_hash(sample_ppt_map(2, 2, 100).choi().mat()));
  }
  SECTION("self-composition at 2x2 is entanglement breaking") {
    HPMap m = sample_ppt_map(2, 2, 7);
    CHECK(is_superpositive_k(compose(m, m), 1, opts).is_member());
  }
}

TEST_CASE("sample_nonppt_cp_map") {
  SolverOptions opts;
  for (std::uint64_t s : {1ull, 5ull}) {
    HPMap m = sample_nonppt_cp_map(2, 2, s);
    CHECK(is_cp(m, opts).is_member());
    CHECK(is_ppt_map(m, opts).is_non_member());
  }
}

TEST_CASE("ppt_square_trial") {
  SolverOptions opts;
  SECTION("2x2 composites are entanglement breaking") {
    HPMap a = sample_ppt_map(2, 2, 11), b = sample_ppt_map(2, 2, 12);
    TrialRecord rec = ppt_square_trial(a, b, opts);
    CHECK(rec.eb.is_member());
    CHECK(rec.ppt.is_member());
    CHECK(rec.flag == "ok");
    CHECK(rec.phi_hash == matrix_hash(a.choi().mat()));
  }
  SECTION("rank-one EB inputs give EB composites") {
    Rng rng(13);
    HPMap a = sample_sp1_map(2, 2, 1, rng), b = sample_sp1_map(2, 2, 1, rng);
    TrialRecord rec = ppt_square_trial(a, b, opts);
    CHECK(rec.eb.is_member());
  }
  SECTION("verdicts are reproducible at the verdict level") {
    HPMap a = sample_ppt_map(2, 2, 21), b = sample_ppt_map(2, 2, 22);
    TrialRecord r1 = ppt_square_trial(a, b, opts);
    TrialRecord r2 = ppt_square_trial(a, b, opts);
    CHECK(r1.eb.status == r2.eb.status);
    CHECK(r1.ppt.status == r2.ppt.status);
    CHECK(r1.flag == r2.flag);
  }
  SECTION("non-PPT inputs are rejected") {
    CHECK_THROWS_AS(ppt_square_trial(transpose_map(2), transpose_map(2), opts),
                    std::invalid_argument);
  }
}

TEST_CASE("equivalence_sampler") {
  SolverOptions opts;
  SECTION("statement (i) on a product-Choi pair is trivially separable") {
    Matrix c = Matrix::Zero(4, 4);
    c(0, 0) = 1.0;  // Choi e11 (x) e11
    HPMap m = from_choi(2, 2, c);
    REQUIRE(is_ppt_map(m, opts).is_member());
    auto v = is_superpositive_k(compose(m, m), 1, opts);
    CHECK(v.is_member());
  }
  SECTION("short runs of (i) and (vi) at 2x2 report no failures") {
    auto ri = equivalence_sampler("i", 6, 2, 2, 3, opts);
    CHECK(ri.failures == 0);
    CHECK(ri.passes + ri.unknowns == ri.trials);
    auto rvi = equivalence_sampler("vi", 6, 2, 2, 3, opts);
    CHECK(rvi.failures == 0);
  }
  SECTION("positive-map statements are pinned to 2x2") {
    CHECK_THROWS_AS(equivalence_sampler("vi", 2, 3, 3, 1, opts), std::invalid_argument);
  }
  SECTION("unknown statement id") {
    CHECK_THROWS_AS(equivalence_sampler("viii", 2, 2, 2, 1, opts), std::invalid_argument);
  }
}
