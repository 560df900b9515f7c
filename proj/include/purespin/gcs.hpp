#ifndef PURESPIN_GCS_HPP
#define PURESPIN_GCS_HPP

#include <stdexcept>
#include <vector>

#include "purespin/dirac.hpp"
#include "purespin/scalar.hpp"
#include "purespin/spinor.hpp"
#include "purespin/subspace.hpp"

namespace purespin {

// ---- complexification: rational data viewed over the gaussian rationals ----

inline Matrix<Gaussian> complexify(const Matrix<Rational>& m) {
  Matrix<Gaussian> out = zero_matrix<Gaussian>(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = Gaussian(m(i, j));
  return out;
}

inline Vector<Gaussian> complexify(const Vector<Rational>& v) {
  Vector<Gaussian> out = zero_vector<Gaussian>(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = Gaussian(v(i));
  return out;
}

inline Subspace<Gaussian> complexify(const Subspace<Rational>& s) {
  return Subspace<Gaussian>::span(s.ambient, complexify(s.rows));
}

inline MultiElement<Gaussian> complexify(const MultiElement<Rational>& a) {
  MultiElement<Gaussian> out(a.space);
  for (auto& [mask, c] : a.comp) out.set_mask(mask, Gaussian(c));
  return out;
}

inline ReductionDatum<Gaussian> complexify(const ReductionDatum<Rational>& d) {
  ReductionDatum<Gaussian> out;
  out.m = d.m;
  out.tangentN = complexify(d.tangentN);
  out.vertical = complexify(d.vertical);
  out.delta = complexify(d.delta);
  for (auto& xi : d.moment_covectors) out.moment_covectors.push_back(complexify(xi));
  out.B = complexify(d.B);
  return out;
}

inline Matrix<Rational> real_part(const Matrix<Gaussian>& m) {
  Matrix<Rational> out = zero_matrix<Rational>(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).re;
  return out;
}

inline Matrix<Rational> imag_part(const Matrix<Gaussian>& m) {
  Matrix<Rational> out = zero_matrix<Rational>(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).im;
  return out;
}

// ---- generalized (almost) complex structures on the split fiber ----

// Pairing-orthogonal complex structure: J² = −id, ⟨J·, J·⟩ = ⟨·,·⟩.
struct GCStructure {
  int n = 0;
  Matrix<Rational> j;  // 2n × 2n, acting on split column vectors

  GCStructure() : j(zero_matrix<Rational>(0, 0)) {}
};

inline bool gcs_matrix_valid(const Matrix<Rational>& j) {
  if (j.rows() != j.cols() || j.rows() % 2 != 0 || j.rows() == 0) return false;
  const int n = static_cast<int>(j.rows()) / 2;
  Matrix<Rational> sq = j * j + identity_matrix<Rational>(2 * n);
  Matrix<Rational> g = split_gram<Rational>(n);
  Matrix<Rational> orth = j.transpose() * g * j - g;
  for (Eigen::Index a = 0; a < 2 * n; ++a)
    for (Eigen::Index b = 0; b < 2 * n; ++b)
      if (!is_zero(sq(a, b)) || !is_zero(orth(a, b))) return false;
  return true;
}

inline GCStructure make_gcs(const Matrix<Rational>& j) {
  if (!gcs_matrix_valid(j))
    throw std::invalid_argument("make_gcs: J must satisfy J² = -id and preserve the pairing");
  GCStructure out;
  out.n = static_cast<int>(j.rows()) / 2;
  out.j = j;
  return out;
}

// +i eigenspace L = {e − iJe | e ∈ E}; rows are (I − iJᵀ) over the gaussian
// rationals.
inline Subspace<Gaussian> eigenbundle(const GCStructure& gc) {
  const int d = 2 * gc.n;
  Matrix<Gaussian> rows = complexify(identity_matrix<Rational>(d));
  Matrix<Gaussian> jt = complexify(Matrix<Rational>(gc.j.transpose()));
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b) rows(a, b) -= Gaussian::i() * jt(a, b);
  auto l = Subspace<Gaussian>::span(Ambient::split(gc.n), rows);
  if (l.dim() != gc.n || !is_lagrangian(l))
    throw std::logic_error("eigenbundle: eigenspace is not a complex Lagrangian");
  return l;
}

// L ∩ conj(L) = 0: L is the eigenbundle of a real structure.
inline bool is_generalized_complex(const Subspace<Gaussian>& l) {
  if (!is_lagrangian(l)) throw std::invalid_argument("is_generalized_complex: not Lagrangian");
  return intersect(l, conj(l)).dim() == 0;
}

// Recover J from its +i eigenspace: for l = x + iy ∈ L one has Jx = −y and
// Jy = x; the real and imaginary parts of a basis span E when L∩L̄ = 0.
inline GCStructure reconstruct(const Subspace<Gaussian>& l) {
  if (!is_generalized_complex(l))
    throw std::invalid_argument("reconstruct: L ∩ conj(L) must be zero");
  const int n = l.ambient.n;
  Matrix<Rational> x = real_part(l.rows), y = imag_part(l.rows);
  Matrix<Rational> a = zero_matrix<Rational>(2 * n, 2 * n);
  Matrix<Rational> c = zero_matrix<Rational>(2 * n, 2 * n);
  a.topRows(n) = x;
  a.bottomRows(n) = y;
  c.topRows(n) = -y;
  c.bottomRows(n) = x;
  auto inv = inverse(Matrix<Rational>(a.transpose()));
  if (!inv) throw std::logic_error("reconstruct: real/imaginary parts do not span");
  return make_gcs(Matrix<Rational>(c.transpose() * *inv));
}

// Pure spinor line of the eigenbundle over the gaussian rationals.
inline SpinorLineElement<Gaussian> spinor_of_gcs(const GCStructure& gc) {
  auto l = eigenbundle(gc);
  return SpinorLineElement<Gaussian>{spinor_of(l), l};
}

// ---- reduction compatibility ----

struct CompatibilityReport {
  Subspace<Rational> jk_cap_kperp;
  bool compatible = false;  // JK ∩ K⊥ ⊆ K
  bool strong = false;      // JK ∩ K⊥ = 0
  int l_cap_kc_rank = 0;    // dim_ℂ (L ∩ K_ℂ)
  int lred_conj_rank = 0;   // dim_ℂ (L_red ∩ conj(L_red)) on the reduced fiber
};

// Diagnoses JK∩K⊥ against K and independently computes the rank of
// L_red ∩ conj(L_red) on K⊥/K; the two verdicts must agree.
inline CompatibilityReport reduction_compatible(const GCStructure& gc,
                                                const Subspace<Rational>& k) {
  if (k.ambient != Ambient::split(gc.n))
    throw std::invalid_argument("reduction_compatible: ambient mismatch");
  if (!is_isotropic(k)) throw std::invalid_argument("reduction_compatible: K not isotropic");

  CompatibilityReport rep;
  auto jk = Subspace<Rational>::span(k.ambient, Matrix<Rational>(k.rows * gc.j.transpose()));
  rep.jk_cap_kperp = intersect(jk, perp(k));
  rep.compatible = k.contains(rep.jk_cap_kperp);
  rep.strong = rep.jk_cap_kperp.dim() == 0;

  auto l = eigenbundle(gc);
  auto kc = complexify(k);
  rep.l_cap_kc_rank = intersect(l, kc).dim();

  // L_red = (L∩K⊥_ℂ + K_ℂ)/K_ℂ; both L_red and its conjugate contain the
  // kernel K_ℂ upstairs, so the reduced intersection rank is the upstairs one
  // minus dim K.
  auto s1 = sum(intersect(l, perp(kc)), kc);
  auto s2 = conj(s1);
  rep.lred_conj_rank = intersect(s1, s2).dim() - k.dim();
  if (rep.compatible != (rep.lred_conj_rank == 0))
    throw std::logic_error("reduction_compatible: eigenvalue and quotient verdicts disagree");
  return rep;
}

// ---- Nitta's setting: J u_M = dμ^u ----

struct NittaReport {
  Subspace<Gaussian> intersection;  // L ∩ K_ℂ in parametrized form
  bool matches_bruteforce = false;
  bool anchor_iso = false;  // pr_V : L ∩ K_ℂ → vertical ⊗ ℂ bijective
};

// dmu[j] is the moment differential paired with the j-th vertical generator
// (the j-th row of d.vertical.rows).  Verifies J u = dμ^u first, then returns
// span_ℂ{(u_j ; −i dμ_j)} and cross-checks it against the brute-force
// intersection of the eigenbundle with K_ℂ.
inline NittaReport nitta_intersection(const GCStructure& gc, const ReductionDatum<Rational>& d,
                                      const std::vector<Vector<Rational>>& dmu) {
  validate_datum(d);
  if (gc.n != d.m) throw std::invalid_argument("nitta_intersection: ambient mismatch");
  const int m = d.m, r = d.r();
  if (static_cast<int>(dmu.size()) != r)
    throw std::invalid_argument("nitta_intersection: need one dμ per vertical generator");

  for (int jdx = 0; jdx < r; ++jdx) {
    if (dmu[jdx].size() != m) throw std::invalid_argument("nitta_intersection: dμ length");
    Vector<Rational> e = zero_vector<Rational>(2 * m);
    e.head(m) = d.vertical.rows.row(jdx).transpose();
    Vector<Rational> want = zero_vector<Rational>(2 * m);
    want.tail(m) = dmu[jdx];
    Vector<Rational> got = gc.j * e;
    for (int a = 0; a < 2 * m; ++a)
      if (!is_zero(Rational(got(a) - want(a))))
        throw std::invalid_argument("nitta_intersection: J u ≠ dμ^u for generator " +
                                    std::to_string(jdx + 1));
  }

  Matrix<Gaussian> rows = zero_matrix<Gaussian>(r, 2 * m);
  for (int jdx = 0; jdx < r; ++jdx) {
    rows.row(jdx).head(m) = complexify(Matrix<Rational>(d.vertical.rows.row(jdx)));
    Vector<Gaussian> minus_i_dmu =
        complexify(Vector<Rational>(dmu[jdx])) * Gaussian(Rational(0), Rational(-1));
    rows.row(jdx).tail(m) = minus_i_dmu.transpose();
  }
  NittaReport rep;
  rep.intersection = Subspace<Gaussian>::span(Ambient::split(m), rows);

  auto brute = intersect(eigenbundle(gc), complexify(build_K(d)));
  rep.matches_bruteforce = rep.intersection == brute;

  // anchor isomorphism onto vertical ⊗ ℂ
  Matrix<Gaussian> xpart = rep.intersection.rows.leftCols(m);
  auto xspan = Subspace<Gaussian>::span(Ambient::plain(m), xpart);
  rep.anchor_iso = rank(xpart) == rep.intersection.dim() &&
                   xspan == complexify(Subspace<Rational>::span(Ambient::plain(m),
                                                                Matrix<Rational>(d.vertical.rows)));
  return rep;
}

}  // namespace purespin

#endif  // PURESPIN_GCS_HPP
