#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "purespin/gcs.hpp"
#include "support/random_support.hpp"

using namespace purespin;
using testsupport::Rng;

using MG = MultiElement<Gaussian>;

namespace {

Matrix<Rational> from_ints(int rows, int cols, std::initializer_list<long long> entries) {
  Matrix<Rational> m = zero_matrix<Rational>(rows, cols);
  auto it = entries.begin();
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Rational(*it++);
  return m;
}

Matrix<Gaussian> from_gauss(int rows, int cols,
                            std::initializer_list<std::pair<long long, long long>> entries) {
  Matrix<Gaussian> m = zero_matrix<Gaussian>(rows, cols);
  auto it = entries.begin();
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      m(i, j) = Gaussian(Rational(it->first), Rational(it->second));
      ++it;
    }
  return m;
}

// standard symplectic structure for omega = e^1^e^2 + e^3^e^4 + ...
Matrix<Rational> j_symplectic(int n) {
  REQUIRE(n % 2 == 0);
  Matrix<Rational> am = zero_matrix<Rational>(n, n);  // omega_sharp X = Am X
  for (int i = 0; i < n; i += 2) {
    am(i + 1, i) = Rational(1);
    am(i, i + 1) = Rational(-1);
  }
  Matrix<Rational> j = zero_matrix<Rational>(2 * n, 2 * n);
  j.topRightCorner(n, n) = *inverse(am);
  j.bottomLeftCorner(n, n) = -am;
  return j;
}

// block [[-J0, 0], [0, J0^T]] for the standard rotation J0 on consecutive pairs
Matrix<Rational> j_complex(int n) {
  REQUIRE(n % 2 == 0);
  Matrix<Rational> j0 = zero_matrix<Rational>(n, n);
  for (int i = 0; i < n; i += 2) {
    j0(i + 1, i) = Rational(1);
    j0(i, i + 1) = Rational(-1);
  }
  Matrix<Rational> j = zero_matrix<Rational>(2 * n, 2 * n);
  j.topLeftCorner(n, n) = -j0;
  j.bottomRightCorner(n, n) = j0.transpose();
  return j;
}

// conjugate a standard structure by a random pairing-orthogonal matrix:
// tau_B composed with the GL(V) block diag(P, P^{-T})
GCStructure random_gcs(Rng& rng, int n) {
  Matrix<Rational> jstd = rng.uniform(0, 1) ? j_symplectic(n) : j_complex(n);
  Matrix<Rational> p;
  std::optional<Matrix<Rational>> pinv;
  do {
    p = rng.matrix<Rational>(n, n);
    pinv = inverse(p);
  } while (!pinv);
  Matrix<Rational> c = zero_matrix<Rational>(2 * n, 2 * n);
  c.topLeftCorner(n, n) = p;
  c.bottomRightCorner(n, n) = pinv->transpose();
  auto b = rng.homogeneous<Rational>(BasedSpace(n, true), 2);
  Matrix<Rational> bm = two_form_matrix(b, n);
  Matrix<Rational> tb = identity_matrix<Rational>(2 * n);
  tb.bottomLeftCorner(n, n) = bm.transpose();  // (X;xi) -> (X; xi + i_X B)
  Matrix<Rational> conjm = tb * c;
  return make_gcs(Matrix<Rational>(conjm * jstd * *inverse(conjm)));
}

// the shared single-fiber datum: m=4, N-fiber span{e2,e3,e4}, circle direction
// e2, zero moment covector
ReductionDatum<Rational> circle_datum() {
  ReductionDatum<Rational> d;
  d.m = 4;
  d.tangentN = Subspace<Rational>::span(
      Ambient::plain(4), from_ints(3, 4, {0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1}));
  d.vertical = Subspace<Rational>::span(Ambient::plain(4), from_ints(1, 4, {0, 1, 0, 0}));
  d.delta = MultiElement<Rational>::basis(BasedSpace(4, false), 2);
  d.moment_covectors.push_back(zero_vector<Rational>(4));
  d.B = MultiElement<Rational>::zero(BasedSpace(4, true));
  return d;
}

}  // namespace

TEST_CASE("make_gcs validates the defining identities") {
  CHECK_NOTHROW(make_gcs(j_symplectic(2)));
  CHECK_NOTHROW(make_gcs(j_complex(2)));
  CHECK_NOTHROW(make_gcs(j_symplectic(4)));
  CHECK_NOTHROW(make_gcs(j_complex(4)));
  CHECK_THROWS(make_gcs(identity_matrix<Rational>(4)));  // squares to +id
  // squares to -id but breaks the pairing: rotate V and V* oppositely
  Matrix<Rational> bad = zero_matrix<Rational>(4, 4);
  bad(1, 0) = Rational(1);
  bad(0, 1) = Rational(-1);
  bad(3, 2) = Rational(-1);
  bad(2, 3) = Rational(1);
  CHECK_THROWS(make_gcs(bad));
  CHECK_THROWS(make_gcs(zero_matrix<Rational>(3, 3)));
}

TEST_CASE("eigenbundle landmarks") {
  // symplectic on the plane: L = span{X + i omega_sharp X}
  auto lsym = eigenbundle(make_gcs(j_symplectic(2)));
  auto expect_sym = Subspace<Gaussian>::span(
      Ambient::split(2),
      from_gauss(2, 4, {{1, 0}, {0, 0}, {0, 0}, {0, 1}, {0, 0}, {1, 0}, {0, -1}, {0, 0}}));
  CHECK(lsym == expect_sym);

  // complex structure: L = T_{0,1} + Ann(T_{0,1})
  auto lcx = eigenbundle(make_gcs(j_complex(2)));
  auto t01 = embed_v(from_gauss(1, 2, {{1, 0}, {0, 1}}), 2);
  auto ann = embed_vstar(from_gauss(1, 2, {{1, 0}, {0, 1}}), 2);
  CHECK(lcx == sum(t01, ann));
  CHECK(is_lagrangian(lcx));
}

TEST_CASE("is_generalized_complex") {
  CHECK(is_generalized_complex(eigenbundle(make_gcs(j_symplectic(2)))));
  CHECK(is_generalized_complex(eigenbundle(make_gcs(j_complex(4)))));
  // complexified real Lagrangian equals its own conjugate
  CHECK(!is_generalized_complex(complexify(embed_v(identity_matrix<Rational>(2), 2))));

  // oracle: L cap conj(L) = 0 iff the real and imaginary parts of a basis span
  Rng rng(401);
  for (int trial = 0; trial < 120; ++trial) {
    int n = rng.uniform(2, 3);
    auto l = rng.lagrangian<Gaussian>(n);
    Matrix<Rational> parts = zero_matrix<Rational>(2 * n, 2 * n);
    parts.topRows(n) = real_part(l.rows);
    parts.bottomRows(n) = imag_part(l.rows);
    CHECK(is_generalized_complex(l) == (rank(parts) == 2 * n));
  }
}

TEST_CASE("reconstruct inverts eigenbundle") {
  auto jsym = make_gcs(j_symplectic(2));
  CHECK(reconstruct(eigenbundle(jsym)).j == jsym.j);
  auto jcx = make_gcs(j_complex(4));
  CHECK(reconstruct(eigenbundle(jcx)).j == jcx.j);
  CHECK_THROWS(reconstruct(complexify(embed_v(identity_matrix<Rational>(2), 2))));

  Rng rng(409);
  for (int trial = 0; trial < 40; ++trial) {
    int n = rng.uniform(0, 1) ? 2 : 4;
    auto gc = random_gcs(rng, n);
    auto l = eigenbundle(gc);
    CHECK(is_generalized_complex(l));
    auto back = reconstruct(l);
    CHECK(back.j == gc.j);
    CHECK(eigenbundle(back) == l);
  }
}

TEST_CASE("spinor_of_gcs landmarks and purity") {
  BasedSpace d2(2, true);
  // e^{-i omega} = 1 - i e^1^e^2
  auto sym = spinor_of_gcs(make_gcs(j_symplectic(2)));
  CHECK(sym.form == MG::one(d2) - MG::term(d2, {1, 2}, Gaussian::i()));
  // dz = e^1 + i e^2
  auto cx = spinor_of_gcs(make_gcs(j_complex(2)));
  CHECK(cx.form == MG::basis(d2, 1) + MG::basis(d2, 2) * Gaussian::i());

  Rng rng(419);
  for (int trial = 0; trial < 25; ++trial) {
    int n = rng.uniform(0, 1) ? 2 : 4;
    auto gc = random_gcs(rng, n);
    auto s = spinor_of_gcs(gc);
    CHECK(is_pure(s.form));
    CHECK(annihilator(s.form) == eigenbundle(gc));
    CHECK(annihilator(s.form) == *s.certificate);
  }
}

TEST_CASE("reduction_compatible on the two circle-action landmarks") {
  auto k = build_K(circle_datum());
  REQUIRE(k.dim() == 2);

  // complex structure on C^2: JK cap Kperp = 0 (strong)
  auto rep_cx = reduction_compatible(make_gcs(j_complex(4)), k);
  CHECK(rep_cx.strong);
  CHECK(rep_cx.compatible);
  CHECK(rep_cx.l_cap_kc_rank == 0);
  CHECK(rep_cx.lred_conj_rank == 0);

  // symplectic structure: JK = K, compatible but not strong
  auto rep_sym = reduction_compatible(make_gcs(j_symplectic(4)), k);
  CHECK(rep_sym.jk_cap_kperp == k);
  CHECK(rep_sym.compatible);
  CHECK(!rep_sym.strong);
  CHECK(rep_sym.l_cap_kc_rank == 1);
  CHECK(rep_sym.lred_conj_rank == 0);

  // K = 0 is trivially compatible and strong
  auto rep0 = reduction_compatible(make_gcs(j_complex(4)),
                                   Subspace<Rational>::zero(Ambient::split(4)));
  CHECK(rep0.compatible);
  CHECK(rep0.strong);
  CHECK(rep0.l_cap_kc_rank == 0);

  // span{e1, e^1} is not isotropic
  Matrix<Rational> ni = zero_matrix<Rational>(2, 8);
  ni(0, 0) = Rational(1);
  ni(1, 4) = Rational(1);
  CHECK_THROWS(reduction_compatible(make_gcs(j_complex(4)),
                                    Subspace<Rational>::span(Ambient::split(4), ni)));
}

TEST_CASE("reduction_compatible: quotient-rank oracle, randomized") {
  Rng rng(421);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    int n = rng.uniform(0, 1) ? 2 : 4;
    auto gc = random_gcs(rng, n);
    auto k = rng.isotropic<Rational>(n, n - 1);
    auto rep = reduction_compatible(gc, k);
    CHECK(rep.compatible == (rep.lred_conj_rank == 0));
    if (rep.strong) CHECK(rep.compatible);

    // independent oracle: push both sides through explicit quotient coordinates
    auto kc = complexify(k);
    auto s1 = sum(intersect(eigenbundle(gc), perp(kc)), kc);
    auto s2 = conj(s1);
    auto qm = quotient_coords(perp(kc), kc);
    int q = qm.q;
    REQUIRE(q == 2 * (n - k.dim()));
    auto r1 = Subspace<Gaussian>::span(Ambient::plain(q),
                                       Matrix<Gaussian>(s1.rows * qm.map.transpose()));
    auto r2 = Subspace<Gaussian>::span(Ambient::plain(q),
                                       Matrix<Gaussian>(s2.rows * qm.map.transpose()));
    CHECK(intersect(r1, r2).dim() == rep.lred_conj_rank);
    ++checked;
  }
  CHECK(checked == 200);
}

TEST_CASE("nitta_intersection: toy circle datum") {
  auto d = circle_datum();
  std::vector<Vector<Rational>> dmu = {zero_vector<Rational>(4)};
  dmu[0](0) = Rational(1);  // dmu = e^1

  auto rep = nitta_intersection(make_gcs(j_symplectic(4)), d, dmu);
  auto expect = Subspace<Gaussian>::span(
      Ambient::split(4),
      from_gauss(1, 8, {{0, 0}, {1, 0}, {0, 0}, {0, 0}, {0, -1}, {0, 0}, {0, 0}, {0, 0}}));
  CHECK(rep.intersection == expect);
  CHECK(rep.intersection.dim() == 1);
  CHECK(rep.matches_bruteforce);
  CHECK(rep.anchor_iso);
}

TEST_CASE("nitta_intersection: precondition rejection") {
  auto d = circle_datum();
  std::vector<Vector<Rational>> dmu_zero = {zero_vector<Rational>(4)};
  // J e2 = e1 lands in V, not in V*, so J u != dmu for any covector
  CHECK_THROWS_AS(nitta_intersection(make_gcs(j_complex(4)), d, dmu_zero),
                  std::invalid_argument);
  CHECK_THROWS_AS(nitta_intersection(make_gcs(j_symplectic(4)), d, {}),
                  std::invalid_argument);
}

TEST_CASE("strong case forces an empty intersection") {
  // the complex-structure landmark satisfies JK cap Kperp = 0; the brute-force
  // intersection of its eigenbundle with K_C is zero
  auto k = build_K(circle_datum());
  auto l = eigenbundle(make_gcs(j_complex(4)));
  CHECK(intersect(l, complexify(k)).dim() == 0);
}
