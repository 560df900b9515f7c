#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "purespin/dirac.hpp"
#include "support/dirac_support.hpp"

using namespace purespin;
using testsupport::Rng;

using MR = MultiElement<Rational>;

namespace {

Matrix<Rational> from_ints(std::initializer_list<std::initializer_list<long long>> rows) {
  Matrix<Rational> m = zero_matrix<Rational>(
      static_cast<Eigen::Index>(rows.size()),
      static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (auto& row : rows) {
    Eigen::Index j = 0;
    for (auto v : row) m(i, j++) = Rational(v);
    ++i;
  }
  return m;
}

// L_Δ = Δ ⊕ Ann(Δ)
Subspace<Rational> l_of_distribution(const Matrix<Rational>& delta_rows, int m) {
  auto d = Subspace<Rational>::span(Ambient::plain(m), delta_rows);
  return sum(embed_v(Matrix<Rational>(d.rows), m),
             embed_vstar(annihilator_rows(Matrix<Rational>(d.rows), m), m));
}

}  // namespace

TEST_CASE("build_K landmarks") {
  // trivial datum
  auto triv = ReductionDatum<Rational>::trivial(3);
  CHECK(build_K(triv) == Subspace<Rational>::zero(Ambient::split(3)));

  // r = 0, tangentN = span{e1,e3} in m = 3: K = span{e^2}
  ReductionDatum<Rational> fol;
  fol.m = 3;
  fol.tangentN = Subspace<Rational>::span(Ambient::plain(3), from_ints({{1, 0, 0}, {0, 0, 1}}));
  fol.vertical = Subspace<Rational>::zero(Ambient::plain(3));
  fol.delta = MR::one(BasedSpace(3, false));
  fol.B = MR::zero(BasedSpace(3, true));
  CHECK(build_K(fol) == embed_vstar(from_ints({{0, 1, 0}}), 3));

  // circle action on C^2 at x = (1,0,0,0) with coords (x1,y1,x2,y2):
  // K = span{∂_{y1}} ⊕ span{dx1}
  ReductionDatum<Rational> cp1;
  cp1.m = 4;
  cp1.tangentN = Subspace<Rational>::span(
      Ambient::plain(4), from_ints({{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}));
  cp1.vertical = Subspace<Rational>::span(Ambient::plain(4), from_ints({{0, 1, 0, 0}}));
  cp1.delta = MultiElement<Rational>::basis(BasedSpace(4, false), 2);
  Vector<Rational> dx1 = zero_vector<Rational>(4);
  dx1(0) = Rational(1);
  cp1.moment_covectors.push_back(dx1);
  cp1.B = MR::zero(BasedSpace(4, true));
  auto k = build_K(cp1);
  CHECK(k == sum(embed_v(from_ints({{0, 1, 0, 0}}), 4), embed_vstar(from_ints({{1, 0, 0, 0}}), 4)));
  CHECK(is_isotropic(k));

  // inadmissible covector rejected with a diagnostic
  ReductionDatum<Rational> bad = cp1;
  Vector<Rational> dy2 = zero_vector<Rational>(4);
  dy2(3) = Rational(1);
  bad.moment_covectors[0] = dy2;  // pairs nontrivially with tangentN
  CHECK_THROWS_WITH_AS(build_K(bad), doctest::Contains("fail to annihilate"),
                       std::invalid_argument);
}

TEST_CASE("restrict: graphs restrict to pulled-back graphs") {
  Rng rng(401);
  for (int trial = 0; trial < 40; ++trial) {
    int m = rng.uniform(2, 5);
    BasedSpace dm(m, true);
    auto omega = rng.homogeneous<Rational>(dm, 2);
    auto l = tau_B(omega, embed_v(identity_matrix<Rational>(m), m));
    int t = rng.uniform(1, m);
    Subspace<Rational> tn;
    do {
      tn = Subspace<Rational>::span(Ambient::plain(m), rng.matrix<Rational>(t, m));
    } while (tn.dim() != t);
    auto res = restrict(l, tn);
    // oracle: graph of j*omega in TN coordinates
    auto pulled = push_linear(Matrix<Rational>(tn.rows), omega);
    auto expected = tau_B(pulled, embed_v(identity_matrix<Rational>(t), t));
    CHECK(res == expected);
    CHECK(is_lagrangian(res));
  }

  // L = V* restricts to the conormal, L = V to the tangent
  int m = 3;
  auto tn = Subspace<Rational>::span(Ambient::plain(m), from_ints({{1, 0, 0}, {0, 1, 0}}));
  CHECK(restrict(embed_vstar(identity_matrix<Rational>(m), m), tn) ==
        embed_vstar(identity_matrix<Rational>(2), 2));
  CHECK(restrict(embed_v(identity_matrix<Rational>(m), m), tn) ==
        embed_v(identity_matrix<Rational>(2), 2));
}

TEST_CASE("forward_image basics and functoriality") {
  Rng rng(409);
  int m = 3;
  auto l = rng.lagrangian<Rational>(m);
  CHECK(forward_image(identity_matrix<Rational>(m), l) == l);

  // surjective f, L = V -> W
  auto f = rng.matrix<Rational>(2, 3);
  while (rank(f) != 2) f = rng.matrix<Rational>(2, 3);
  CHECK(forward_image(f, embed_v(identity_matrix<Rational>(3), 3)) ==
        embed_v(identity_matrix<Rational>(2), 2));

  // projection R^2 -> R^1 kills the symplectic graph: enumerating the
  // defining conditions, only X = 0 admits a matching covector, so the image
  // is the conormal line {0}⊕W* (spinor cross-check: the fiberwise pushdown
  // of e^{-omega} is a multiple of e^1, whose annihilator is {0}⊕W*)
  auto proj = from_ints({{1, 0}});
  BasedSpace d2(2, true);
  auto graph = tau_B(MR::term(d2, {1, 2}, Rational(1)), embed_v(identity_matrix<Rational>(2), 2));
  CHECK(forward_image(proj, graph) == embed_vstar(identity_matrix<Rational>(1), 1));

  for (int trial = 0; trial < 30; ++trial) {
    int a = rng.uniform(2, 4), b = rng.uniform(1, 4), c = rng.uniform(1, 4);
    auto la = rng.lagrangian<Rational>(a);
    auto fab = rng.matrix<Rational>(b, a);
    auto fbc = rng.matrix<Rational>(c, b);
    auto lhs = forward_image(Matrix<Rational>(fbc * fab), la);
    auto rhs = forward_image(fbc, forward_image(fab, la));
    CHECK(lhs == rhs);
    CHECK(is_lagrangian(forward_image(fab, la)));
  }
}

TEST_CASE("reduce: foliation landmark and trivial datum") {
  // Δ = span{e1,e2}, tangentN = span{e1,e3}, r = 0: L_red = L_{Δ∩TN}
  ReductionDatum<Rational> d;
  d.m = 3;
  d.tangentN = Subspace<Rational>::span(Ambient::plain(3), from_ints({{1, 0, 0}, {0, 0, 1}}));
  d.vertical = Subspace<Rational>::zero(Ambient::plain(3));
  d.delta = MR::one(BasedSpace(3, false));
  d.B = MR::zero(BasedSpace(3, true));
  auto l = l_of_distribution(from_ints({{1, 0, 0}, {0, 1, 0}}), 3);
  auto lred = reduce(l, d);
  // TN coordinates (e1, e3): Δ∩TN = span{e1} -> span{ē1} ⊕ span{ē^2}
  auto expected = Subspace<Rational>::span(Ambient::split(2),
                                           from_ints({{1, 0, 0, 0}, {0, 0, 0, 1}}));
  CHECK(lred == expected);

  Rng rng(419);
  for (int trial = 0; trial < 20; ++trial) {
    int m = rng.uniform(2, 5);
    auto lr = rng.lagrangian<Rational>(m);
    CHECK(reduce(lr, ReductionDatum<Rational>::trivial(m)) == lr);
  }
}

TEST_CASE("reduce: randomized two-route gate and horizontal-choice independence") {
  Rng rng(421);
  int done = 0;
  while (done < 60) {
    int m = rng.uniform(2, 5);
    auto d = random_datum<Rational>(rng, m, rng.uniform(0, 1) == 1);
    auto l = rng.lagrangian<Rational>(m);
    auto lred = reduce(l, d);  // internal gate: two routes must agree
    CHECK(is_lagrangian(lred));

    // splitting-choice independence: random complement of vertical in TN
    int nr = d.t() - d.r();
    Matrix<Rational> hor = zero_matrix<Rational>(nr, m);
    Matrix<Rational> stacked = zero_matrix<Rational>(d.t(), m);
    stacked.topRows(d.r()) = d.vertical.rows;
    bool ok = false;
    for (int attempt = 0; attempt < 20 && !ok; ++attempt) {
      hor = rng.matrix<Rational>(nr, d.t()) * d.tangentN.rows;
      stacked.bottomRows(nr) = hor;
      ok = rank(stacked) == d.t();
    }
    if (!ok) continue;
    CHECK(reduce(l, d, std::optional<Matrix<Rational>>(hor)) == lred);
    ++done;
  }
}

TEST_CASE("perturbation_input: landmark and postconditions") {
  // non-transversal foliation: Δ = span{e1}, tangentN = span{e1,e2} in m = 3
  auto l = l_of_distribution(from_ints({{1, 0, 0}}), 3);
  auto k = embed_vstar(from_ints({{0, 0, 1}}), 3);  // Ann(TN)
  auto dsub = perturbation_input(l, k);
  CHECK(dsub == embed_v(from_ints({{0, 0, 1}}), 3));  // the line span{∂3}

  // transversal: D = 0
  Rng rng(431);
  for (int trial = 0; trial < 80; ++trial) {
    int m = rng.uniform(2, 5);
    auto lr = rng.lagrangian<Rational>(m);
    auto kr = rng.isotropic<Rational>(m, m - 1);
    auto dd = perturbation_input(lr, kr);
    auto kl = intersect(lr, kr);
    if (kl.dim() == 0) CHECK(dd.dim() == 0);
    CHECK(dd.dim() == kl.dim());
    CHECK(is_isotropic(dd));
    CHECK(sum(perp(kl), dd).dim() == 2 * m);  // complementary
  }
}

TEST_CASE("perturb: landmark, invariances, and reduced equality") {
  // foliation example: L_D = (TF+D) ⊕ Ann(TF+D)
  auto l = l_of_distribution(from_ints({{1, 0, 0}}), 3);
  auto k = embed_vstar(from_ints({{0, 0, 1}}), 3);
  auto dsub = perturbation_input(l, k);
  auto ld = perturb(l, dsub, k);
  CHECK(ld == l_of_distribution(from_ints({{1, 0, 0}, {0, 0, 1}}), 3));

  CHECK(perturb(l, Subspace<Rational>::zero(Ambient::split(3)),
                Subspace<Rational>::zero(Ambient::split(3))) == l);

  Rng rng(433);
  int done = 0;
  while (done < 50) {
    int m = rng.uniform(2, 5);
    auto d = random_datum<Rational>(rng, m, false);
    auto kk = build_K(d);
    auto ll = nontransversal_lagrangian<Rational>(rng, kk);
    if (!ll) continue;
    auto dd = perturbation_input(*ll, kk);
    REQUIRE(dd.dim() > 0);
    auto lld = perturb(*ll, dd, kk);
    CHECK(is_lagrangian(lld));
    CHECK(intersect(lld, kk).dim() == 0);
    CHECK(sum(intersect(lld, perp(kk)), kk) == sum(intersect(*ll, perp(kk)), kk));
    CHECK(reduce(lld, d) == reduce(*ll, d));
    ++done;
  }
}

TEST_CASE("perturb_spinor: annihilator round-trip") {
  Rng rng(439);
  int done = 0;
  while (done < 40) {
    int m = rng.uniform(2, 4);
    auto d = random_datum<Rational>(rng, m, false);
    auto kk = build_K(d);
    auto ll = nontransversal_lagrangian<Rational>(rng, kk);
    if (!ll) continue;
    auto phi = spinor_of(*ll);
    auto dd = perturbation_input(*ll, kk);
    auto phi_d = perturb_spinor(phi, dd);
    REQUIRE(!phi_d.is_zero());
    CHECK(annihilator(phi_d) == perturb(*ll, dd, kk));
    ++done;
  }
  // D = 0 leaves the spinor unchanged
  BasedSpace d2(2, true);
  auto phi = MR::one(d2);
  CHECK(perturb_spinor(phi, Subspace<Rational>::zero(Ambient::split(2))) == phi);
}

TEST_CASE("reduce_spinor: trivial datum returns the spinor") {
  Rng rng(443);
  for (int trial = 0; trial < 20; ++trial) {
    int m = rng.uniform(2, 4);
    auto l = rng.lagrangian<Rational>(m);
    auto phi = spinor_of(l);
    auto out = reduce_spinor(phi, ReductionDatum<Rational>::trivial(m));
    CHECK(out.form == phi);
    CHECK(out.nonzero);
    CHECK(out.transversal);
  }
}

TEST_CASE("reduce_spinor: annihilator equals reduce on random transversal instances") {
  Rng rng(449);
  int done = 0;
  while (done < 60) {
    int m = rng.uniform(2, 5);
    auto d = random_datum<Rational>(rng, m, rng.uniform(0, 1) == 1);
    auto l = rng.lagrangian<Rational>(m);
    auto phi = spinor_of(l);
    auto out = reduce_spinor(phi, d);
    if (!out.nonzero) continue;  // auto-perturbation should make this rare
    CHECK(annihilator(out.form) == reduce(l, d));
    ++done;
  }
}

TEST_CASE("reduce_spinor: non-transversal foliation gives -e^2-bar via auto perturbation") {
  ReductionDatum<Rational> d;
  d.m = 3;
  d.tangentN = Subspace<Rational>::span(Ambient::plain(3), from_ints({{1, 0, 0}, {0, 1, 0}}));
  d.vertical = Subspace<Rational>::zero(Ambient::plain(3));
  d.delta = MR::one(BasedSpace(3, false));
  d.B = MR::zero(BasedSpace(3, true));
  auto l = l_of_distribution(from_ints({{1, 0, 0}}), 3);
  auto phi = spinor_of(l);  // e^2 ∧ e^3
  CHECK(phi == MR::term(BasedSpace(3, true), {2, 3}, Rational(1)));

  auto out = reduce_spinor(phi, d);
  CHECK(out.intersection_rank == 1);
  CHECK(out.transversal);  // after perturbing
  BasedSpace base(2, true);
  CHECK(out.form == MultiElement<Rational>::basis(base, 2) * Rational(-1));
  CHECK(annihilator(out.form) == reduce(l, d));

  // with the perturbation suppressed the output vanishes and is flagged
  auto raw = reduce_spinor(phi, d, std::optional<Subspace<Rational>>(Subspace<Rational>::zero(Ambient::split(3))));
  CHECK(!raw.nonzero);
  CHECK(!raw.transversal);
}

TEST_CASE("reduce_spinor: zero exactly on non-transversal fibers when unperturbed") {
  Rng rng(457);
  int done = 0;
  while (done < 80) {
    int m = rng.uniform(2, 5);
    auto d = random_datum<Rational>(rng, m, false);
    auto kk = build_K(d);
    Subspace<Rational> l;
    if (rng.uniform(0, 1) == 1) {
      auto ll = nontransversal_lagrangian<Rational>(rng, kk);
      if (!ll) continue;
      l = *ll;
    } else {
      l = rng.lagrangian<Rational>(m);
    }
    auto phi = spinor_of(l);
    auto out = reduce_spinor(phi, d, std::optional<Subspace<Rational>>(Subspace<Rational>::zero(Ambient::split(m))));
    bool transversal = intersect(l, kk).dim() == 0;
    CHECK(out.nonzero == transversal);
    ++done;
  }
}

TEST_CASE("reduce_spinor: delta scaling and splitting-change consistency") {
  Rng rng(461);
  int done = 0;
  while (done < 30) {
    int m = rng.uniform(2, 4);
    auto d = random_datum<Rational>(rng, m, true);
    auto l = rng.lagrangian<Rational>(m);
    auto phi = spinor_of(l);
    auto out = reduce_spinor(phi, d);
    if (!out.nonzero) continue;

    // scaling delta scales the output, annihilator unchanged
    auto d3 = d;
    d3.delta = d.delta * Rational(3);
    auto out3 = reduce_spinor(phi, d3);
    CHECK(out3.form == out.form * Rational(3));
    CHECK(annihilator(out3.form) == annihilator(out.form));

    // the B handling matches the subspace picture
    CHECK(annihilator(out.form) == reduce(l, d));
    ++done;
  }
}

TEST_CASE("check_transversality_theorem") {
  Rng rng(463);
  // K = 0: both routes nonzero, rank 0
  {
    auto l = rng.lagrangian<Rational>(3);
    auto rep = check_transversality_theorem(spinor_of(l), ReductionDatum<Rational>::trivial(3));
    CHECK(rep.covariant_nonzero);
    CHECK(rep.contravariant_nonzero);
    CHECK(rep.intersection_rank == 0);
    CHECK(rep.routes_agree);
    CHECK(rep.biconditional_holds);
  }
  // L ⊇ K with K ≠ 0: both zero, rank = dim K
  {
    ReductionDatum<Rational> d;
    d.m = 3;
    d.tangentN = Subspace<Rational>::span(Ambient::plain(3), from_ints({{1, 0, 0}, {0, 1, 0}}));
    d.vertical = Subspace<Rational>::zero(Ambient::plain(3));
    d.delta = MR::one(BasedSpace(3, false));
    d.B = MR::zero(BasedSpace(3, true));
    auto l = embed_vstar(identity_matrix<Rational>(3), 3);  // contains Ann(TN)
    auto rep = check_transversality_theorem(spinor_of(l), d);
    CHECK(!rep.covariant_nonzero);
    CHECK(!rep.contravariant_nonzero);
    CHECK(rep.intersection_rank == 1);
    CHECK(rep.biconditional_holds);
  }
  // randomized biconditional
  int done = 0;
  while (done < 80) {
    int m = rng.uniform(2, 5);
    auto d = random_datum<Rational>(rng, m, false);
    Subspace<Rational> l;
    if (rng.uniform(0, 1) == 1) {
      auto kk = build_K(d);
      auto ll = nontransversal_lagrangian<Rational>(rng, kk);
      if (!ll) continue;
      l = *ll;
    } else {
      l = rng.lagrangian<Rational>(m);
    }
    auto rep = check_transversality_theorem(spinor_of(l), d);
    CHECK(rep.biconditional_holds);
    CHECK(rep.routes_agree);
    ++done;
  }
}

TEST_CASE("cp1 fiber: reduced spinor is proportional to dz") {
  using MG = MultiElement<Gaussian>;
  const Gaussian i = Gaussian::i();

  ReductionDatum<Gaussian> d;
  d.m = 4;
  d.tangentN = Subspace<Gaussian>::span(
      Ambient::plain(4),
      [] {
        Matrix<Gaussian> t = zero_matrix<Gaussian>(3, 4);
        t(0, 1) = Gaussian(1);
        t(1, 2) = Gaussian(1);
        t(2, 3) = Gaussian(1);
        return t;
      }());
  d.vertical = Subspace<Gaussian>::span(Ambient::plain(4), [] {
    Matrix<Gaussian> v = zero_matrix<Gaussian>(1, 4);
    v(0, 1) = Gaussian(1);
    return v;
  }());
  d.delta = MG::basis(BasedSpace(4, false), 2);
  Vector<Gaussian> dx1 = zero_vector<Gaussian>(4);
  dx1(0) = Gaussian(1);
  d.moment_covectors.push_back(dx1);
  d.B = MG::zero(BasedSpace(4, true));

  // φ = dz1 ∧ dz2 with dz1 = e^1 + i e^2, dz2 = e^3 + i e^4
  BasedSpace dual(4, true);
  auto dz1 = MG::basis(dual, 1) + MG::basis(dual, 2) * i;
  auto dz2 = MG::basis(dual, 3) + MG::basis(dual, 4) * i;
  auto phi = wedge(dz1, dz2);

  auto out = reduce_spinor(phi, d);
  REQUIRE(out.nonzero);
  CHECK(out.transversal);
  // base coords (x2, y2): expect -i·(ē^1 + i ē^2) = -i·dz
  BasedSpace base(2, true);
  auto dz = MG::basis(base, 1) + MG::basis(base, 2) * i;
  CHECK(out.form == dz * (-i));
  CHECK(annihilator(out.form) == reduce(annihilator(phi), d));
}
