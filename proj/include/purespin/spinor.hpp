#ifndef PURESPIN_SPINOR_HPP
#define PURESPIN_SPINOR_HPP

#include <optional>
#include <stdexcept>
#include <vector>

#include "purespin/exterior.hpp"
#include "purespin/linalg.hpp"
#include "purespin/subspace.hpp"

namespace purespin {

// Π(e)φ = i_{p(e)}φ + s(e)∧φ for e = (X;ξ) in split coordinates and φ ∈ ΛV*.
// Note Π(e)² = ξ(X)·id = ½⟨e,e⟩·id: the fixed normalization constant is
// κ = 1/2 relative to the pairing.
template <typename S>
MultiElement<S> clifford_act(const Vector<S>& e, const MultiElement<S>& phi) {
  if (!phi.space.dual) throw std::invalid_argument("clifford_act: phi must live in ΛV*");
  int n = phi.space.dim;
  if (e.size() != 2 * n) throw std::invalid_argument("clifford_act: dimension mismatch");
  BasedSpace v(n, false);
  auto x = MultiElement<S>::vector(v, e.head(n));
  auto xi = MultiElement<S>::vector(phi.space, e.tail(n));
  return contract(x, phi) + wedge(xi, phi);
}

// Π^op(e)𝔛 = p(e)∧𝔛 + i_{s(e)}𝔛 for 𝔛 ∈ ΛV.
template <typename S>
MultiElement<S> clifford_act_op(const Vector<S>& e, const MultiElement<S>& chi) {
  if (chi.space.dual) throw std::invalid_argument("clifford_act_op: argument must live in ΛV");
  int n = chi.space.dim;
  if (e.size() != 2 * n) throw std::invalid_argument("clifford_act_op: dimension mismatch");
  BasedSpace vstar(n, true);
  auto x = MultiElement<S>::vector(chi.space, e.head(n));
  auto xi = MultiElement<S>::vector(vstar, e.tail(n));
  return wedge(x, chi) + contract(xi, chi);
}

// The word (d_l, …, d_1) acts as Π(d_l)∘⋯∘Π(d_1): the last letter is applied
// first, realizing 𝔡 = d_l∧⋯∧d_1 on isotropic words.
template <typename S>
MultiElement<S> clifford_word(const std::vector<Vector<S>>& word, MultiElement<S> phi) {
  if (word.empty()) throw std::invalid_argument("clifford_word: empty word");
  for (auto it = word.rbegin(); it != word.rend(); ++it) phi = clifford_act(*it, phi);
  return phi;
}

template <typename S>
MultiElement<S> clifford_word_op(const std::vector<Vector<S>>& word, MultiElement<S> chi) {
  if (word.empty()) throw std::invalid_argument("clifford_word_op: empty word");
  for (auto it = word.rbegin(); it != word.rend(); ++it) chi = clifford_act_op(*it, chi);
  return chi;
}

// Solution space of Π(e)φ = 0 over e in the split fiber.
template <typename S>
Subspace<S> annihilator(const MultiElement<S>& phi) {
  if (phi.is_zero()) throw std::invalid_argument("annihilator: zero is not a spinor");
  int n = phi.space.dim;
  // columns: action of each split basis vector; rows: coefficients on ΛV*
  Matrix<S> sys = zero_matrix<S>(Eigen::Index(1) << n, 2 * n);
  for (int k = 0; k < 2 * n; ++k) {
    Vector<S> e = zero_vector<S>(2 * n);
    e(k) = S(1);
    auto img = clifford_act(e, phi);
    for (auto& [mask, c] : img.comp) sys(static_cast<Eigen::Index>(mask), k) = c;
  }
  Matrix<S> null = nullspace(sys);
  return Subspace<S>::span(Ambient::split(n), null);
}

template <typename S>
bool is_pure(const MultiElement<S>& phi) {
  return annihilator(phi).dim() == phi.space.dim;
}

template <typename S>
struct SpinorLineElement {
  MultiElement<S> form;
  std::optional<Subspace<S>> certificate;  // the annihilator, when known
};

// Pure spinor of a Lagrangian: φ = e^{−ω}∧Ω with ω the 2-form induced on
// S = p(L) (extended by zero on the non-pivot coordinate complement) and
// Ω the wedge of the echelon basis of L∩V*.
template <typename S>
MultiElement<S> spinor_of(const Subspace<S>& l) {
  if (!is_lagrangian(l)) throw std::invalid_argument("spinor_of: input is not Lagrangian");
  const int n = l.ambient.n;
  BasedSpace dual(n, true);

  auto sp = project_p(l);  // S = p(L), echelon rows
  const Echelon<S> se = rref(Matrix<S>(sp.rows));
  const int s_dim = sp.dim();

  // lift each echelon basis vector X of S to (X;ξ) ∈ L
  Matrix<S> xi_rows = zero_matrix<S>(s_dim, n);
  Matrix<S> a = l.rows.leftCols(n).transpose();  // n × dim L
  for (int k = 0; k < s_dim; ++k) {
    auto c = solve(a, Vector<S>(sp.rows.row(k).transpose()));
    if (!c) throw std::logic_error("spinor_of: lift failed");
    xi_rows.row(k) = (c->transpose() * l.rows).rightCols(n);
  }

  // ω(e_a, e_b) via the projection onto S along the non-pivot coordinate
  // subspace: π e_a = P_k when a is the k-th pivot, 0 otherwise.
  std::vector<int> pivot_of(n, -1);
  for (int k = 0; k < s_dim; ++k) pivot_of[se.pivots[k]] = k;
  MultiElement<S> omega(dual);
  for (int aidx = 0; aidx < n; ++aidx) {
    for (int bidx = aidx + 1; bidx < n; ++bidx) {
      int ka = pivot_of[aidx], kb = pivot_of[bidx];
      if (ka < 0 || kb < 0) continue;
      S val(0);  // ω(P_ka, P_kb) = ξ_{P_ka}(P_kb)
      for (int j = 0; j < n; ++j) val += xi_rows(ka, j) * sp.rows(kb, j);
      omega.add_mask((std::uint32_t(1) << aidx) | (std::uint32_t(1) << bidx), val);
    }
  }

  // Ω: wedge of the echelon basis of L∩V*
  auto lcap = intersect(l, embed_vstar(identity_matrix<S>(n), n));
  MultiElement<S> big_omega = MultiElement<S>::one(dual);
  for (Eigen::Index k = 0; k < lcap.rows.rows(); ++k) {
    auto cov = MultiElement<S>::vector(dual, Vector<S>(lcap.rows.row(k).tail(n).transpose()));
    big_omega = wedge(big_omega, cov);
  }

  return wedge(exp_two_form(-omega), big_omega);
}

// F_ν(a) = i_a ν: linear bijection between ΛV and ΛV* induced by a top
// element ν of the opposite algebra.
template <typename S>
MultiElement<S> fourier(const MultiElement<S>& nu, const MultiElement<S>& a) {
  if (nu.is_zero() || !nu.is_homogeneous() || nu.grade() != nu.space.dim)
    throw std::invalid_argument("fourier: nu must be a nonzero top element");
  return contract_multi(a, nu);
}

// C_δ: express α in the supplied (horizontal, vertical) coframe, keep the
// terms carrying the full vertical factor, strip it, and scale by i_{ξ^I}δ.
// horizontal/vertical rows are covectors on the t-dimensional N-fiber; δ is a
// grade-r multivector spanning Λ^r of the vertical subspace.
template <typename S>
MultiElement<S> c_delta(const MultiElement<S>& alpha, const Matrix<S>& horizontal,
                        const Matrix<S>& vertical_coframe, const MultiElement<S>& delta) {
  if (!alpha.space.dual) throw std::invalid_argument("c_delta: alpha must live in ΛV*");
  const int t = alpha.space.dim;
  const int r = static_cast<int>(vertical_coframe.rows());
  if (horizontal.cols() != t || vertical_coframe.cols() != t || horizontal.rows() != t - r)
    throw std::invalid_argument("c_delta: coframe shape mismatch");
  if (delta.is_zero()) throw std::invalid_argument("c_delta: delta must be nonzero");
  if (!delta.is_homogeneous() || delta.grade() != r || delta.space.dual ||
      delta.space.dim != t)
    throw std::invalid_argument("c_delta: delta must be a grade-r multivector on the N-fiber");

  Matrix<S> coframe = zero_matrix<S>(t, t);
  coframe.topRows(t - r) = horizontal;
  coframe.bottomRows(r) = vertical_coframe;
  auto inv = inverse(Matrix<S>(coframe.transpose()));
  if (!inv) throw std::invalid_argument("c_delta: coframe rows are not a basis");

  // coefficients of α in the new coframe; vectors transform with the coframe
  // matrix itself
  auto alpha_new = push_linear(*inv, alpha);
  auto delta_new = push_linear(coframe, delta);

  // i_{ξ^I} δ with I the full vertical set (indices t-r+1..t in new coords)
  const std::uint32_t vert_mask = ((std::uint32_t(1) << r) - 1) << (t - r);
  MultiElement<S> xi_top(BasedSpace(t, true));
  xi_top.set_mask(vert_mask, S(1));
  S scale = contract_multi(xi_top, delta_new).coeff(std::uint32_t(0));

  if (r == 0) return alpha * scale;

  BasedSpace base(std::max(t - r, 1), true);
  MultiElement<S> out(base);
  for (auto& [mask, c] : alpha_new.comp) {
    if ((mask & vert_mask) != vert_mask) continue;
    // horizontal indices all precede vertical ones, so e^H∧e^vert carries no
    // extra sign
    out.add_mask(mask & ~vert_mask, c * scale);
  }
  return out;
}

}  // namespace purespin

#endif  // PURESPIN_SPINOR_HPP
