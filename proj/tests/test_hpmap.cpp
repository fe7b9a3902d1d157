#include "mapcones/hpmap.hpp"
#include "mapcones/sampling.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace mapcones;

namespace {

Matrix e(int i, int j, int d = 2) { return matrix_unit(i, j, d); }

HPMap random_map(int dA, int dB, Rng& rng) {
  return from_choi(dA, dB, random_hermitian(dA * dB, rng));
}

double mdiff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("constructors") {
  SECTION("from_choi rejects a grossly non-self-adjoint matrix") {
    Matrix bad = Matrix::Zero(4, 4);
    bad(0, 1) = 1.0;  // no mirror entry
    CHECK_THROWS_AS(from_choi(2, 2, bad), std::invalid_argument);
  }
  SECTION("from_kraus of the identity gives the maximally entangled pattern") {
    HPMap id = from_kraus({Matrix::Identity(2, 2)});
    Matrix want = Matrix::Zero(4, 4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) want += kron(e(i, j), e(i, j));
    CHECK(mdiff(id.choi().mat(), want) == 0.0);
    CHECK(mdiff(id.choi().mat(), identity_map(2).choi().mat()) == 0.0);
  }
  SECTION("from_kraus with signs subtracts") {
    HPMap m = from_kraus({Matrix::Identity(2, 2), Matrix::Identity(2, 2)}, {1, -1});
    CHECK(m.choi().mat().norm() == 0.0);
  }
  SECTION("from_images of the transpose map assembles the swap operator") {
    std::vector<Matrix> images;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) images.push_back(e(j, i));
    HPMap t = from_images(images, 2);
    CHECK(mdiff(t.choi().mat(), transpose_map(2).choi().mat()) == 0.0);
  }
  SECTION("from_images rejects Hermitian-inconsistent blocks") {
    std::vector<Matrix> images = {e(0, 0), e(0, 1), 3.0 * e(0, 1), e(1, 1)};
    CHECK_THROWS_AS(from_images(images, 2), std::invalid_argument);
  }
}

TEST_CASE("apply") {
  Rng rng(101);
  SECTION("identity map acts as the identity") {
    HPMap id = identity_map(3);
    Matrix a = random_ginibre(3, 3, rng);
    CHECK(mdiff(mapcones::apply(id, a), a) < 1e-14);
  }
  SECTION("sigma = 1 + Ad_{e21} under Ad_a(x) = a* x a") {
    HPMap s = sigma_map();
    // basis images pinned by the printed Choi matrix
    CHECK(mdiff(mapcones::apply(s, e(0, 0)), e(0, 0)) == 0.0);
    CHECK(mdiff(mapcones::apply(s, e(1, 1)), Matrix(Matrix::Identity(2, 2))) == 0.0);
  }
  SECTION("defining identity <a (x) b, C_phi> = <b, phi(a)> on random probes") {
    for (int t = 0; t < 30; ++t) {
      HPMap phi = random_map(2, 3, rng);
      Matrix a = random_ginibre(2, 2, rng), b = random_ginibre(3, 3, rng);
      cxd lhs = pairing_raw(kron(a, b), phi.choi().mat());
      cxd rhs = pairing_raw(b, mapcones::apply(phi, a));
      CHECK(std::abs(lhs - rhs) < 1e-11);
    }
  }
  SECTION("linear, and apply(phi, a^*) = apply(phi, a)^*") {
    for (int t = 0; t < 20; ++t) {
      HPMap phi = random_map(3, 2, rng);
      Matrix a = random_ginibre(3, 3, rng), b = random_ginibre(3, 3, rng);
      cxd l(0.7, -0.2);
      CHECK(mdiff(mapcones::apply(phi, Matrix(a + l * b)),
                  mapcones::apply(phi, a) + l * mapcones::apply(phi, b)) < 1e-12);
      CHECK(mdiff(mapcones::apply(phi, Matrix(a.adjoint())),
                  mapcones::apply(phi, a).adjoint()) < 1e-12);
    }
  }
  SECTION("dimension mismatch") {
    CHECK_THROWS_AS(mapcones::apply(sigma_map(), Matrix(Matrix::Identity(3, 3))),
                    DimensionError);
  }
}

TEST_CASE("adjoint") {
  Rng rng(103);
  SECTION("defining identity <phi(a), b> = <a, phi*(b)>") {
    for (int t = 0; t < 30; ++t) {
      HPMap phi = random_map(2, 3, rng);
      HPMap adj = adjoint(phi);
      Matrix a = random_ginibre(2, 2, rng), b = random_ginibre(3, 3, rng);
      cxd lhs = pairing_raw(mapcones::apply(phi, a), b);
      cxd rhs = pairing_raw(a, mapcones::apply(adj, b));
      CHECK(std::abs(lhs - rhs) < 1e-11);
    }
  }
  SECTION("involution and dim exchange") {
    HPMap phi = random_map(2, 3, rng);
    CHECK(adjoint(phi).dimA() == 3);
    CHECK(mdiff(adjoint(adjoint(phi)).choi().mat(), phi.choi().mat()) < 1e-14);
  }
}

TEST_CASE("compose") {
  Rng rng(107);
  SECTION("the two composition formulas agree") {
    for (int t = 0; t < 40; ++t) {
      HPMap phi = random_map(2, 3, rng), psi = random_map(3, 2, rng);
      CHECK(mdiff(compose(psi, phi).choi().mat(), compose_schur(psi, phi).choi().mat()) <
            1e-10);
    }
  }
  SECTION("associativity on random triples") {
    for (int t = 0; t < 20; ++t) {
      HPMap f = random_map(2, 3, rng), g = random_map(3, 2, rng), h = random_map(2, 2, rng);
      CHECK(mdiff(compose(compose(f, g), f).choi().mat(),
                  compose(f, compose(g, f)).choi().mat()) < 1e-11);
      CHECK(mdiff(compose(compose(h, f), g).choi().mat(),
                  compose(h, compose(f, g)).choi().mat()) < 1e-11);
    }
  }
  SECTION("adjoint is contravariant") {
    for (int t = 0; t < 20; ++t) {
      HPMap phi = random_map(2, 3, rng), psi = random_map(3, 2, rng);
      CHECK(mdiff(adjoint(compose(psi, phi)).choi().mat(),
                  compose(adjoint(phi), adjoint(psi)).choi().mat()) < 1e-12);
    }
  }
  SECTION("phi_beta o sigma o phi_alpha for another parameter pair") {
    double al = 0.7, be = 1.9;
    Matrix want = Matrix::Zero(4, 4);
    want(0, 0) = al * be;
    want(2, 2) = be / al;
    want(3, 3) = 1.0 / (al * be);
    want(0, 3) = want(3, 0) = 1.0;
    CHECK(mdiff(compose(phi_alpha(be), compose(sigma_map(), phi_alpha(al))).choi().mat(),
                want) < 1e-12);
  }
  SECTION("inner dimension mismatch") {
    CHECK_THROWS_AS(compose(random_map(3, 2, rng), random_map(2, 2, rng)), DimensionError);
  }
}

TEST_CASE("compose_transpose") {
  Rng rng(109);
  SECTION("identity precomposed with transpose is the transpose map") {
    CHECK(mdiff(compose_transpose(identity_map(2)).choi().mat(),
                transpose_map(2).choi().mat()) == 0.0);
  }
  SECTION("involution") {
    HPMap phi = random_map(2, 3, rng);
    CHECK(mdiff(compose_transpose(compose_transpose(phi)).choi().mat(), phi.choi().mat()) ==
          0.0);
  }
  SECTION("agrees with composing against the transpose map") {
    for (int t = 0; t < 10; ++t) {
      HPMap phi = random_map(2, 3, rng);
      CHECK(mdiff(compose_transpose(phi).choi().mat(),
                  compose(phi, transpose_map(2)).choi().mat()) < 1e-13);
    }
  }
  SECTION("real Choi matrices: equals the partial transpose") {
    HPMap s = sigma_map();
    CHECK(mdiff(compose_transpose(s).choi().mat(),
                partial_transpose(s.choi()).mat()) == 0.0);
  }
  SECTION("complex case: partial transpose up to conjugation, same spectrum") {
    for (int t = 0; t < 10; ++t) {
      HPMap phi = random_map(2, 2, rng);
      Matrix a = compose_transpose(phi).choi().mat();
      Matrix b = partial_transpose(phi.choi()).mat();
      CHECK(mdiff(a, b.conjugate()) < 1e-13);
      CHECK(std::abs(min_eigenvalue(a) - min_eigenvalue(b)) < 1e-11);
    }
  }
}

TEST_CASE("map pairing identities") {
  Rng rng(113);
  SECTION("worked values") {
    CHECK(map_pairing(phi_abcd(0.3, 0.8, 1.1, 0.5), sigma_map()) ==
          Catch::Approx(0.3 + 1.1 + 0.5 - 2.0));
    CHECK(map_pairing(identity_map(2), identity_map(2)) == Catch::Approx(4.0));
  }
  SECTION("<phi,psi> = <psi*,phi*>") {
    for (int t = 0; t < 40; ++t) {
      HPMap phi = random_map(2, 3, rng), psi = random_map(2, 3, rng);
      CHECK(map_pairing(phi, psi) ==
            Catch::Approx(map_pairing(adjoint(psi), adjoint(phi))).margin(1e-9));
    }
  }
  SECTION("<psi o phi, sigma> = <phi, psi* o sigma> = <psi, sigma o phi*>") {
    for (int t = 0; t < 40; ++t) {
      HPMap phi = random_map(2, 3, rng);   // A -> B
      HPMap psi = random_map(3, 2, rng);   // B -> C
      HPMap sg = random_map(2, 2, rng);    // A -> C
      double lhs = map_pairing(compose(psi, phi), sg);
      CHECK(lhs == Catch::Approx(map_pairing(phi, compose(adjoint(psi), sg))).margin(1e-9));
      CHECK(lhs == Catch::Approx(map_pairing(psi, compose(sg, adjoint(phi)))).margin(1e-9));
    }
  }
  SECTION("dimension mismatch") {
    CHECK_THROWS_AS(map_pairing(sigma_map(), identity_map(3)), DimensionError);
  }
}

TEST_CASE("ampliation") {
  Rng rng(127);
  SECTION("(1 (x) id)(X) = X") {
    BipartiteMatrix x(3, 2, random_hermitian(6, rng));
    CHECK(mdiff(ampliate_left(identity_map(2), 3, x).mat(), x.mat()) < 1e-14);
  }
  SECTION("(1_A (x) psi)(C_phi) = C_{psi o phi}") {
    for (int t = 0; t < 20; ++t) {
      HPMap phi = random_map(2, 3, rng), psi = random_map(3, 3, rng);
      CHECK(mdiff(ampliate_left(psi, 2, phi.choi()).mat(),
                  compose(psi, phi).choi().mat()) < 1e-12);
    }
  }
  SECTION("(phi (x) 1)(x (x) y) = phi(x) (x) y") {
    for (int t = 0; t < 10; ++t) {
      HPMap phi = random_map(2, 3, rng);
      Matrix x = random_hermitian(2, rng), y = random_hermitian(4, rng);
      BipartiteMatrix in = kron(x, y, 2, 4);
      Matrix want = kron(mapcones::apply(phi, x), y);
      CHECK(mdiff(ampliate_right(phi, 4, in).mat(), want) < 1e-12);
    }
  }
  SECTION("shape mismatch") {
    BipartiteMatrix x(3, 3, random_hermitian(9, rng));
    CHECK_THROWS_AS(ampliate_left(sigma_map(), 2, x), DimensionError);
    CHECK_THROWS_AS(ampliate_right(sigma_map(), 2, x), DimensionError);
  }
}

TEST_CASE("builtin map fixtures") {
  SECTION("phi_alpha Choi structure") {
    Matrix c = phi_alpha(2.5).choi().mat();
    CHECK(c(0, 0).real() == Catch::Approx(2.5));
    CHECK(c(3, 3).real() == Catch::Approx(0.4));
    CHECK(c(0, 3).real() == Catch::Approx(1.0));
    CHECK(c(1, 1) == cxd(0, 0));
  }
  SECTION("tau is self-adjoint under the flip") {
    CHECK((flip(tau_map().choi()).mat() - tau_map().choi().mat()).norm() == 0.0);
  }
  SECTION("phi_alpha rejects nonpositive alpha") {
    CHECK_THROWS_AS(phi_alpha(0.0), std::invalid_argument);
  }
}
