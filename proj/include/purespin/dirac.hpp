#ifndef PURESPIN_DIRAC_HPP
#define PURESPIN_DIRAC_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "purespin/spinor.hpp"
#include "purespin/subspace.hpp"

namespace purespin {

// Single-fiber reduction package.  Conventions:
//  * vertical ⊆ tangentN is the kernel of dq, spanned by the action fields;
//    moment_covectors[i] is the lift covector paired with vertical basis row i.
//  * delta spans Λ^r(vertical) inside ΛV.
//  * B is the 2-form of a splitting change: inputs L, φ are given in the
//    original splitting, the admissible one is reached by τ_{-B} on
//    subspaces and e^{B}∧· on spinors (these two agree on annihilators).
template <typename S>
struct ReductionDatum {
  int m = 0;
  Subspace<S> tangentN;                  // ambient plain(m)
  Subspace<S> vertical;                  // ⊆ tangentN
  MultiElement<S> delta;                 // grade r over BasedSpace(m, false)
  std::vector<Vector<S>> moment_covectors;
  MultiElement<S> B;                     // 2-form over BasedSpace(m, true); may be zero

  int t() const { return tangentN.dim(); }
  int r() const { return vertical.dim(); }

  static ReductionDatum trivial(int m) {
    ReductionDatum d;
    d.m = m;
    d.tangentN = Subspace<S>::full(Ambient::plain(m));
    d.vertical = Subspace<S>::zero(Ambient::plain(m));
    d.delta = MultiElement<S>::one(BasedSpace(m, false));
    d.B = MultiElement<S>::zero(BasedSpace(m, true));
    return d;
  }
};

// pairs (generator index, tangentN basis index) with nonzero pairing
template <typename S>
std::vector<std::pair<int, int>> admissibility_violations(const ReductionDatum<S>& d) {
  std::vector<std::pair<int, int>> out;
  for (std::size_t i = 0; i < d.moment_covectors.size(); ++i)
    for (Eigen::Index j = 0; j < d.tangentN.rows.rows(); ++j) {
      S acc(0);
      for (int k = 0; k < d.m; ++k) acc += d.moment_covectors[i](k) * d.tangentN.rows(j, k);
      if (!is_zero(acc)) out.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  return out;
}

template <typename S>
void validate_datum(const ReductionDatum<S>& d) {
  if (d.m < 1 || d.m > 8) throw std::invalid_argument("datum: ambient dim must be in 1..8");
  if (d.tangentN.ambient != Ambient::plain(d.m) || d.vertical.ambient != Ambient::plain(d.m))
    throw std::invalid_argument("datum: tangentN/vertical ambient mismatch");
  if (!d.tangentN.contains(d.vertical))
    throw std::invalid_argument("datum: vertical is not contained in tangentN");
  if (d.t() - d.r() < 1)
    throw std::invalid_argument("datum: reduced fiber would be zero-dimensional");
  if (static_cast<int>(d.moment_covectors.size()) != d.r())
    throw std::invalid_argument("datum: need one moment covector per vertical generator");
  for (auto& xi : d.moment_covectors)
    if (xi.size() != d.m) throw std::invalid_argument("datum: moment covector length");
  if (d.delta.is_zero()) throw std::invalid_argument("datum: delta must be nonzero");
  if (d.delta.space != BasedSpace(d.m, false) || !d.delta.is_homogeneous() ||
      d.delta.grade() != d.r())
    throw std::invalid_argument("datum: delta must have grade r in ΛV");
  // delta must span Λ^r(vertical): proportional to the wedge of the basis
  MultiElement<S> w = MultiElement<S>::one(BasedSpace(d.m, false));
  for (Eigen::Index k = 0; k < d.vertical.rows.rows(); ++k)
    w = wedge(w, MultiElement<S>::vector(BasedSpace(d.m, false),
                                         Vector<S>(d.vertical.rows.row(k).transpose())));
  // delta = c·w for a single scalar c
  S c(0);
  bool have_c = false;
  for (auto& [mask, coeff] : w.comp) {
    S dc = d.delta.coeff(mask);
    if (!have_c && !is_zero(dc)) {
      c = dc / coeff;
      have_c = true;
    }
  }
  if (!have_c || !(w * c == d.delta))
    throw std::invalid_argument("datum: delta does not span the top power of vertical");
  if (!d.B.is_zero() && (d.B.space != BasedSpace(d.m, true) || !d.B.is_homogeneous() ||
                         d.B.grade() != 2))
    throw std::invalid_argument("datum: B must be a 2-form over V*");
  auto viol = admissibility_violations(d);
  if (!viol.empty()) {
    std::string msg = "datum: moment covectors fail to annihilate tangentN at pairs";
    for (auto& [i, j] : viol)
      msg += " (" + std::to_string(i) + "," + std::to_string(j) + ")";
    throw std::invalid_argument(msg);
  }
}

// K = {lifted action generators} ⊕ p*(Ann(TN))
template <typename S>
Subspace<S> build_K(const ReductionDatum<S>& d) {
  validate_datum(d);
  Matrix<S> ann = annihilator_rows(Matrix<S>(d.tangentN.rows), d.m);
  if (d.tangentN.dim() == d.m) ann = zero_matrix<S>(0, d.m);
  Matrix<S> rows = zero_matrix<S>(d.r() + ann.rows(), 2 * d.m);
  for (int i = 0; i < d.r(); ++i) {
    rows.row(i).head(d.m) = d.vertical.rows.row(i);
    rows.row(i).tail(d.m) = d.moment_covectors[i].transpose();
  }
  for (Eigen::Index k = 0; k < ann.rows(); ++k) rows.row(d.r() + k).tail(d.m) = ann.row(k);
  auto k = Subspace<S>::span(Ambient::split(d.m), rows);
  if (!is_isotropic(k)) throw std::logic_error("build_K: K is not isotropic");
  return k;
}

// 𝔅j(L) = {X + j*β : X ∈ TN, (X;β) ∈ L}, in the coordinates of the
// tangentN echelon basis.
template <typename S>
Subspace<S> restrict(const Subspace<S>& l, const Subspace<S>& tangentN) {
  if (!l.ambient.is_split()) throw std::invalid_argument("restrict: L must be split");
  const int m = l.ambient.n;
  if (tangentN.ambient != Ambient::plain(m))
    throw std::invalid_argument("restrict: tangentN ambient mismatch");
  const int t = tangentN.dim();
  const Matrix<S>& tn = tangentN.rows;
  auto dom = sum(embed_v(Matrix<S>(tn), m), embed_vstar(identity_matrix<S>(m), m));
  auto li = intersect(l, dom);
  Matrix<S> out = zero_matrix<S>(li.rows.rows(), 2 * t);
  // RREF coordinates on TN: read off the pivot entries
  auto te = rref(Matrix<S>(tn));
  for (Eigen::Index k = 0; k < li.rows.rows(); ++k) {
    for (int a = 0; a < t; ++a) {
      out(k, a) = li.rows(k, te.pivots[a]);           // coords of X in the T basis
      S acc(0);                                        // (j*β)_a = β(T_a)
      for (int j = 0; j < m; ++j) acc += li.rows(k, m + j) * tn(a, j);
      out(k, t + a) = acc;
    }
  }
  return Subspace<S>::span(Ambient::split(t), out);
}

// forward Dirac image: {(fX, η) : (X, fᵀη) ∈ L}
template <typename S>
Subspace<S> forward_image(const Matrix<S>& f, const Subspace<S>& l) {
  if (!l.ambient.is_split()) throw std::invalid_argument("forward_image: L must be split");
  const int v = l.ambient.n;
  if (f.cols() != v) throw std::invalid_argument("forward_image: shape mismatch");
  const int w = static_cast<int>(f.rows());
  const Eigen::Index dl = l.rows.rows();
  // unknowns (c, η): (c·L)_ξ = fᵀη
  Matrix<S> sys = zero_matrix<S>(v, dl + w);
  sys.leftCols(dl) = l.rows.rightCols(v).transpose();
  sys.rightCols(w) = -f.transpose();
  Matrix<S> null = nullspace(sys);
  Matrix<S> out = zero_matrix<S>(null.rows(), 2 * w);
  for (Eigen::Index k = 0; k < null.rows(); ++k) {
    Vector<S> c = null.row(k).head(dl).transpose();
    Vector<S> x = (c.transpose() * l.rows).leftCols(v).transpose();
    out.row(k).head(w) = (f * x).transpose();
    out.row(k).tail(w) = null.row(k).tail(w);
  }
  return Subspace<S>::span(Ambient::split(w), out);
}

// Derived linear data of a datum fiber, for a chosen horizontal complement of
// the vertical inside tangentN (default: the canonical echelon complement).
template <typename S>
struct FiberGeometry {
  int m, t, r;
  Matrix<S> T;       // t×m tangentN echelon rows
  Matrix<S> P;       // t×m pivot selector: coordinates on TN
  Matrix<S> qmap;    // (t−r)×m quotient map TN → TN/vertical (zero on complement)
  Matrix<S> qsec;    // (t−r)×m horizontal section rows
  Matrix<S> hn;      // (t−r)×t dq in TN coordinates (= dq* coframe rows)
  Matrix<S> vert_n;  // r×t vertical basis in TN coordinates
  Matrix<S> wcof;    // r×t vertical coframe (dual to the splitting)
  MultiElement<S> delta_n;  // delta in TN coordinates
};

template <typename S>
FiberGeometry<S> fiber_geometry(const ReductionDatum<S>& d,
                                std::optional<Matrix<S>> horizontal = std::nullopt) {
  validate_datum(d);
  FiberGeometry<S> g;
  g.m = d.m;
  g.t = d.t();
  g.r = d.r();
  g.T = d.tangentN.rows;
  auto te = rref(Matrix<S>(g.T));
  g.P = zero_matrix<S>(g.t, g.m);
  for (int a = 0; a < g.t; ++a) g.P(a, te.pivots[a]) = S(1);

  // the base identification TN/vertical is always the canonical quotient;
  // the optional horizontal complement only changes which vertical coframe
  // completion is used in C_δ (Remark-level choice, results must not move)
  auto q = quotient_coords(d.tangentN, d.vertical);
  g.qmap = q.map;
  g.qsec = q.section;

  Matrix<S> sec = g.qsec;
  if (horizontal) {
    sec = *horizontal;
    if (sec.rows() != g.t - g.r || sec.cols() != g.m)
      throw std::invalid_argument("fiber_geometry: horizontal shape mismatch");
    Matrix<S> stacked = zero_matrix<S>(g.t, g.m);
    stacked.topRows(g.r) = d.vertical.rows;
    stacked.bottomRows(g.t - g.r) = sec;
    if (rank(stacked) != g.t ||
        Subspace<S>::span(Ambient::plain(g.m), stacked) != d.tangentN)
      throw std::invalid_argument("fiber_geometry: horizontal is not a complement in TN");
  }

  g.hn = g.qmap * g.T.transpose();
  g.vert_n = d.vertical.rows * g.P.transpose();
  g.delta_n = push_linear(g.P, d.delta);

  // vertical coframe in TN coordinates: vanishes on the chosen complement,
  // dual on the vertical basis
  g.wcof = zero_matrix<S>(g.r, g.t);
  if (g.r > 0) {
    Matrix<S> frame = zero_matrix<S>(g.t, g.t);
    frame.topRows(g.t - g.r) = sec * g.P.transpose();
    frame.bottomRows(g.r) = g.vert_n;
    for (int b = 0; b < g.r; ++b) {
      Vector<S> rhs = zero_vector<S>(g.t);
      rhs(g.t - g.r + b) = S(1);
      auto w = solve(frame, rhs);
      if (!w) throw std::logic_error("fiber_geometry: coframe solve failed");
      g.wcof.row(b) = w->transpose();
    }
  }
  return g;
}

// L_red = (L∩K⊥ + K)/K, computed through the quotient construction and
// independently through restriction followed by the forward Dirac map; the
// two must coincide.
template <typename S>
Subspace<S> reduce(const Subspace<S>& l, const ReductionDatum<S>& d,
                   std::optional<Matrix<S>> horizontal = std::nullopt) {
  if (!is_lagrangian(l) || l.ambient != Ambient::split(d.m))
    throw std::invalid_argument("reduce: L must be Lagrangian over the datum fiber");
  auto g = fiber_geometry(d, horizontal);
  auto lp = d.B.is_zero() ? l : tau_B(-d.B, l);
  auto k = build_K(d);

  // route 1: quotient of L∩K⊥ + K by K through the split identification
  auto num = sum(intersect(lp, perp(k)), k);
  const int nr = g.t - g.r;
  Matrix<S> red = zero_matrix<S>(2 * nr, 2 * d.m);
  red.block(0, 0, nr, d.m) = g.qmap;
  red.block(nr, d.m, nr, d.m) = g.qsec;
  Matrix<S> rows = zero_matrix<S>(num.rows.rows(), 2 * nr);
  for (Eigen::Index i = 0; i < num.rows.rows(); ++i)
    rows.row(i) = (red * Vector<S>(num.rows.row(i).transpose())).transpose();
  auto l1 = Subspace<S>::span(Ambient::split(nr), rows);

  // route 2: 𝔅j then push forward along dq
  auto l2 = forward_image(g.hn, restrict(lp, d.tangentN));

  if (l1 != l2) throw std::logic_error("reduce: quotient and pushforward routes disagree");
  if (!is_lagrangian(l1)) throw std::logic_error("reduce: result is not Lagrangian");
  return l1;
}

// D = {e − ½Ae : e ∈ F} with F the coordinate complement of (L∩K)⊥ and
// ⟨Ae, f⟩ = ⟨e, f⟩, A taking values in L∩K.
template <typename S>
Subspace<S> perturbation_input(const Subspace<S>& l, const Subspace<S>& k) {
  if (l.ambient != k.ambient || !l.ambient.is_split())
    throw std::invalid_argument("perturbation_input: ambient mismatch");
  if (!is_isotropic(k)) throw std::invalid_argument("perturbation_input: K must be isotropic");
  const int n = l.ambient.n;
  auto kl = intersect(l, k);
  const int ld = kl.dim();
  if (ld == 0) return Subspace<S>::zero(l.ambient);

  // F: standard basis vectors at the non-pivot columns of perp(K_L)
  auto pe = rref(Matrix<S>(perp(kl).rows));
  std::vector<int> free_cols;
  {
    std::vector<bool> is_pivot(2 * n, false);
    for (int p : pe.pivots) is_pivot[p] = true;
    for (int c = 0; c < 2 * n; ++c)
      if (!is_pivot[c]) free_cols.push_back(c);
  }
  if (static_cast<int>(free_cols.size()) != ld)
    throw std::logic_error("perturbation_input: complement dimension mismatch");

  // pairing matrices
  Matrix<S> gram = split_gram<S>(n);
  Matrix<S> p_kf = zero_matrix<S>(ld, ld);  // ⟨k_i, f_j⟩
  Matrix<S> p_ff = zero_matrix<S>(ld, ld);  // ⟨f_i, f_j⟩
  for (int i = 0; i < ld; ++i)
    for (int j = 0; j < ld; ++j) {
      Vector<S> fj = zero_vector<S>(2 * n);
      fj(free_cols[j]) = S(1);
      Vector<S> gfj = gram * fj;
      p_kf(i, j) = kl.rows.row(i) * gfj;
      Vector<S> fi = zero_vector<S>(2 * n);
      fi(free_cols[i]) = S(1);
      p_ff(i, j) = fi.transpose() * gfj;
    }
  // A f_j = Σ_i c_{ij} k_i with Σ_i c_{ij} ⟨k_i, f_b⟩ = ⟨f_j, f_b⟩
  auto coeffs = solve_matrix(Matrix<S>(p_kf.transpose()), Matrix<S>(p_ff.transpose()));
  if (!coeffs) throw std::logic_error("perturbation_input: degenerate F×K_L pairing");

  Matrix<S> rows = zero_matrix<S>(ld, 2 * n);
  const S half(1, 2);
  for (int j = 0; j < ld; ++j) {
    Vector<S> v = zero_vector<S>(2 * n);
    v(free_cols[j]) = S(1);
    for (int i = 0; i < ld; ++i)
      v -= Vector<S>(kl.rows.row(i).transpose()) * (half * (*coeffs)(i, j));
    rows.row(j) = v.transpose();
  }
  auto dsub = Subspace<S>::span(l.ambient, rows);
  if (!is_isotropic(dsub)) throw std::logic_error("perturbation_input: D not isotropic");
  return dsub;
}

// L_D = L∩D⊥ + D
template <typename S>
Subspace<S> perturb(const Subspace<S>& l, const Subspace<S>& dsub, const Subspace<S>& k) {
  if (!is_lagrangian(l)) throw std::invalid_argument("perturb: L must be Lagrangian");
  if (!is_isotropic(dsub)) throw std::invalid_argument("perturb: D must be isotropic");
  auto kl = intersect(l, k);
  if (sum(perp(kl), dsub).dim() != l.ambient.dim() || kl.dim() != dsub.dim())
    throw std::invalid_argument("perturb: D is not complementary to (L∩K)-perp");
  auto ld = sum(intersect(l, perp(dsub)), dsub);
  if (!is_lagrangian(ld)) throw std::logic_error("perturb: L_D is not Lagrangian");
  return ld;
}

// word realizing 𝔡 = d_l∧⋯∧d_1 from the echelon basis of D
template <typename S>
std::vector<Vector<S>> perturbation_word(const Subspace<S>& dsub) {
  std::vector<Vector<S>> word;
  for (Eigen::Index k = dsub.rows.rows(); k-- > 0;)
    word.push_back(Vector<S>(dsub.rows.row(k).transpose()));
  return word;
}

// φ_D = Π(𝔡)φ
template <typename S>
MultiElement<S> perturb_spinor(const MultiElement<S>& phi, const Subspace<S>& dsub) {
  if (phi.is_zero()) throw std::invalid_argument("perturb_spinor: zero spinor");
  if (dsub.dim() == 0) return phi;
  return clifford_word(perturbation_word(dsub), phi);
}

template <typename S>
struct SpinorReduction {
  MultiElement<S> form;     // over the base fiber Λ(t−r)*
  bool nonzero = false;
  bool transversal = false; // L∩K = 0 after the splitting change and perturbation
  int intersection_rank = 0;  // rank of L∩K before perturbing
  Subspace<S> d_used;
};

// φ_red = q_* j^* (e^B ∧ Π(𝔡) φ): wedge the splitting change, perturb, pull
// back along TN, extract through C_δ.  Group volume is normalized to 1.
template <typename S>
SpinorReduction<S> reduce_spinor(const MultiElement<S>& phi, const ReductionDatum<S>& d,
                                 std::optional<Subspace<S>> dsub = std::nullopt,
                                 std::optional<Matrix<S>> horizontal = std::nullopt) {
  if (phi.is_zero() || phi.space != BasedSpace(d.m, true))
    throw std::invalid_argument("reduce_spinor: spinor must be nonzero over ΛV*");
  auto g = fiber_geometry(d, horizontal);
  auto k = build_K(d);

  auto phi_b = d.B.is_zero() ? phi : wedge(exp_two_form(d.B), phi);
  auto l = annihilator(phi_b);
  if (l.dim() != d.m) throw std::invalid_argument("reduce_spinor: spinor is not pure");

  SpinorReduction<S> out;
  out.intersection_rank = intersect(l, k).dim();
  if (!dsub) dsub = perturbation_input(l, k);
  out.d_used = *dsub;

  auto phi_d = perturb_spinor(phi_b, *dsub);
  if (dsub->dim() > 0) {
    auto l_eff = perturb(l, *dsub, k);
    out.transversal = intersect(l_eff, k).dim() == 0;
  } else {
    out.transversal = out.intersection_rank == 0;
  }

  MultiElement<S> alpha =
      phi_d.is_zero() ? MultiElement<S>::zero(BasedSpace(d.t(), true))
                      : push_linear(g.T, phi_d);
  out.form = alpha.is_zero()
                 ? MultiElement<S>::zero(BasedSpace(std::max(g.t - g.r, 1), true))
                 : c_delta(alpha, g.hn, g.wcof, g.delta_n);
  out.nonzero = !out.form.is_zero();
  return out;
}

template <typename S>
struct TransversalityReport {
  bool covariant_nonzero = false;     // dq ∘ F_𝔭 ∘ dj* route
  bool contravariant_nonzero = false; // C_δ ∘ dj* route
  int intersection_rank = 0;
  bool routes_agree = false;          // up to a nonzero scalar
  bool biconditional_holds = false;   // nonvanishing ⟺ L∩K = 0
};

namespace detail {
template <typename S>
bool proportional_nonzero(const MultiElement<S>& a, const MultiElement<S>& b) {
  if (a.is_zero() || b.is_zero()) return false;
  if (a.space.dim != b.space.dim) return false;
  std::optional<S> ratio;
  for (auto& [mask, c] : a.comp) {
    S bc = b.coeff(mask);
    if (is_zero(bc)) return false;
    S r = c / bc;
    if (!ratio)
      ratio = r;
    else if (!(*ratio == r))
      return false;
  }
  // every term of b must be matched too
  for (auto& [mask, c] : b.comp)
    if (is_zero(a.coeff(mask))) return false;
  return true;
}
}  // namespace detail

template <typename S>
TransversalityReport<S> check_transversality_theorem(const MultiElement<S>& phi,
                                                     const ReductionDatum<S>& d) {
  auto g = fiber_geometry(d);
  auto k = build_K(d);
  auto phi_b = d.B.is_zero() ? phi : wedge(exp_two_form(d.B), phi);
  auto l = annihilator(phi_b);
  if (l.dim() != d.m)
    throw std::invalid_argument("check_transversality_theorem: spinor is not pure");

  TransversalityReport<S> rep;
  rep.intersection_rank = intersect(l, k).dim();

  auto alpha = push_linear(g.T, phi_b);  // dj*φ on the N-fiber

  // contravariant: C_δ
  auto theta_con = alpha.is_zero()
                       ? MultiElement<S>::zero(BasedSpace(std::max(g.t - g.r, 1), true))
                       : c_delta(alpha, g.hn, g.wcof, g.delta_n);
  rep.contravariant_nonzero = !theta_con.is_zero();

  // covariant: dq ∘ F_𝔭 with 𝔭 the unit top multivector on the N-fiber
  BasedSpace nv(g.t, false);
  std::vector<int> all;
  for (int i = 1; i <= g.t; ++i) all.push_back(i);
  auto p_top = MultiElement<S>::term(nv, all, S(1));
  auto theta_cov_n = fourier(p_top, alpha);  // F_𝔭: forms → multivectors
  auto theta_cov = push_linear(g.hn, theta_cov_n);
  rep.covariant_nonzero = !theta_cov.is_zero();

  rep.biconditional_holds =
      (rep.covariant_nonzero == (rep.intersection_rank == 0)) &&
      (rep.contravariant_nonzero == (rep.intersection_rank == 0));

  if (!rep.covariant_nonzero && !rep.contravariant_nonzero) {
    rep.routes_agree = true;
  } else {
    // compare after moving the covariant result to the form picture on the base
    const int nr = std::max(g.t - g.r, 1);
    BasedSpace bv(nr, false);
    std::vector<int> ball;
    for (int i = 1; i <= nr; ++i) ball.push_back(i);
    auto nu_red = MultiElement<S>::term(BasedSpace(nr, true), ball, S(1));
    auto cov_form = theta_cov.is_zero()
                        ? MultiElement<S>::zero(BasedSpace(nr, true))
                        : fourier(nu_red, theta_cov);
    rep.routes_agree = detail::proportional_nonzero(cov_form, theta_con);
  }
  return rep;
}

}  // namespace purespin

#endif  // PURESPIN_DIRAC_HPP
