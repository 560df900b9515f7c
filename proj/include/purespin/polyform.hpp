#ifndef PURESPIN_POLYFORM_HPP
#define PURESPIN_POLYFORM_HPP

#include <optional>
#include <stdexcept>
#include <vector>

#include "purespin/exterior.hpp"
#include "purespin/poly.hpp"
#include "purespin/spinor.hpp"

namespace purespin {

// Differential form on an n-dimensional chart with polynomial coefficients:
// association from increasing index subsets (bit masks) to polynomials.
template <typename S>
struct PolyForm {
  int n = 0;
  std::map<std::uint32_t, Poly<S>> comp;

  PolyForm() = default;
  explicit PolyForm(int chart_dim) : n(chart_dim) {
    if (chart_dim < 1 || chart_dim > 8)
      throw std::invalid_argument("PolyForm: chart dim must be in 1..8");
  }

  static PolyForm zero(int n) { return PolyForm(n); }
  static PolyForm scalar(int n, Poly<S> p) {
    PolyForm f(n);
    f.add_mask(0, std::move(p));
    return f;
  }
  static PolyForm one(int n) { return scalar(n, Poly<S>::constant(n, S(1))); }
  static PolyForm term(int n, const std::vector<int>& idx, Poly<S> p) {
    PolyForm f(n);
    f.add_mask(detail::indices_to_mask(idx, n), std::move(p));
    return f;
  }
  static PolyForm term(int n, const std::vector<int>& idx, S c) {
    return term(n, idx, Poly<S>::constant(n, std::move(c)));
  }

  void add_mask(std::uint32_t mask, Poly<S> p) {
    if (mask >> n) throw std::invalid_argument("PolyForm: mask out of range");
    if (p.nvars != n) throw std::invalid_argument("PolyForm: coefficient variable count");
    auto it = comp.find(mask);
    if (it == comp.end()) {
      if (!p.is_zero()) comp.emplace(mask, std::move(p));
    } else {
      it->second += p;
      if (it->second.is_zero()) comp.erase(it);
    }
  }
  Poly<S> coeff(std::uint32_t mask) const {
    auto it = comp.find(mask);
    return it == comp.end() ? Poly<S>::zero(n) : it->second;
  }
  Poly<S> coeff(const std::vector<int>& idx) const {
    return coeff(detail::indices_to_mask(idx, n));
  }

  bool is_zero() const { return comp.empty(); }
  bool is_homogeneous() const {
    int g = -1;
    for (auto& [m, p] : comp) {
      int k = std::popcount(m);
      if (g < 0) g = k;
      if (k != g) return false;
    }
    return true;
  }
  int grade() const {
    if (comp.empty()) return 0;
    if (!is_homogeneous()) throw std::invalid_argument("grade of inhomogeneous form");
    return std::popcount(comp.begin()->first);
  }

  PolyForm& operator+=(const PolyForm& o) {
    check(o);
    for (auto& [m, p] : o.comp) add_mask(m, p);
    return *this;
  }
  PolyForm& operator-=(const PolyForm& o) {
    check(o);
    for (auto& [m, p] : o.comp) add_mask(m, -p);
    return *this;
  }
  friend PolyForm operator+(PolyForm a, const PolyForm& b) { return a += b; }
  friend PolyForm operator-(PolyForm a, const PolyForm& b) { return a -= b; }
  PolyForm operator-() const {
    PolyForm out(n);
    for (auto& [m, p] : comp) out.add_mask(m, -p);
    return out;
  }
  friend PolyForm operator*(const PolyForm& a, const Poly<S>& p) {
    PolyForm out(a.n);
    for (auto& [m, q] : a.comp) out.add_mask(m, q * p);
    return out;
  }
  friend PolyForm operator*(const PolyForm& a, const S& c) {
    return a * Poly<S>::constant(a.n, c);
  }

  friend bool operator==(const PolyForm& a, const PolyForm& b) {
    return a.n == b.n && a.comp == b.comp;
  }
  friend bool operator!=(const PolyForm& a, const PolyForm& b) { return !(a == b); }

  MultiElement<S> eval(const Vector<S>& x) const {
    MultiElement<S> out(BasedSpace(n, true));
    for (auto& [m, p] : comp) out.add_mask(m, p.eval(x));
    return out;
  }

  std::string str() const {
    if (comp.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto& [m, p] : comp) {
      if (!first) out += " + ";
      first = false;
      out += "(" + p.str() + ")";
      for (int i = 0; i < n; ++i)
        if (m >> i & 1) out += "^dx" + std::to_string(i + 1);
    }
    return out;
  }

 private:
  void check(const PolyForm& o) const {
    if (n != o.n) throw std::invalid_argument("PolyForm: chart mismatch");
  }
};

template <typename S>
PolyForm<S> wedge(const PolyForm<S>& a, const PolyForm<S>& b) {
  if (a.n != b.n) throw std::invalid_argument("wedge: chart mismatch");
  PolyForm<S> out(a.n);
  for (auto& [ma, pa] : a.comp)
    for (auto& [mb, pb] : b.comp) {
      if (ma & mb) continue;
      Poly<S> prod = pa * pb;
      if (detail::wedge_sign(ma, mb) < 0) prod = -prod;
      out.add_mask(ma | mb, std::move(prod));
    }
  return out;
}

// Vector field with polynomial components.
template <typename S>
struct PolyField {
  int n = 0;
  std::vector<Poly<S>> comp;  // length n

  PolyField() = default;
  explicit PolyField(int chart_dim) : n(chart_dim) {
    if (chart_dim < 1 || chart_dim > 8)
      throw std::invalid_argument("PolyField: chart dim must be in 1..8");
    for (int i = 0; i < n; ++i) comp.push_back(Poly<S>::zero(n));
  }
  static PolyField zero(int n) { return PolyField(n); }
  static PolyField basis(int n, int i) {  // ∂_i, 1-based
    PolyField f(n);
    f.comp[i - 1] = Poly<S>::constant(n, S(1));
    return f;
  }
  static PolyField linear(int n, const Matrix<S>& a) {  // X_i = Σ_j a(i,j) x_j
    PolyField f(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) f.comp[i] += Poly<S>::variable(n, j + 1) * a(i, j);
    return f;
  }

  bool is_zero() const {
    for (auto& p : comp)
      if (!p.is_zero()) return false;
    return true;
  }
  Vector<S> eval(const Vector<S>& x) const {
    Vector<S> v = zero_vector<S>(n);
    for (int i = 0; i < n; ++i) v(i) = comp[i].eval(x);
    return v;
  }

  PolyField& operator+=(const PolyField& o) {
    if (n != o.n) throw std::invalid_argument("PolyField: chart mismatch");
    for (int i = 0; i < n; ++i) comp[i] += o.comp[i];
    return *this;
  }
  friend PolyField operator+(PolyField a, const PolyField& b) { return a += b; }
  PolyField operator-() const {
    PolyField out(n);
    for (int i = 0; i < n; ++i) out.comp[i] = -comp[i];
    return out;
  }
  friend bool operator==(const PolyField& a, const PolyField& b) {
    return a.n == b.n && a.comp == b.comp;
  }
};

// X(f) = Σ_i X_i ∂_i f
template <typename S>
Poly<S> apply_field(const PolyField<S>& x, const Poly<S>& f) {
  if (x.n != f.nvars) throw std::invalid_argument("apply_field: chart mismatch");
  Poly<S> out = Poly<S>::zero(x.n);
  for (int i = 0; i < x.n; ++i) out += x.comp[i] * f.derivative(i + 1);
  return out;
}

// [X,Y]_i = X(Y_i) − Y(X_i)
template <typename S>
PolyField<S> lie_bracket(const PolyField<S>& x, const PolyField<S>& y) {
  if (x.n != y.n) throw std::invalid_argument("lie_bracket: chart mismatch");
  PolyField<S> out(x.n);
  for (int i = 0; i < x.n; ++i)
    out.comp[i] = apply_field(x, y.comp[i]) - apply_field(y, x.comp[i]);
  return out;
}

// i_X α
template <typename S>
PolyForm<S> contract(const PolyField<S>& x, const PolyForm<S>& a) {
  if (x.n != a.n) throw std::invalid_argument("contract: chart mismatch");
  PolyForm<S> out(a.n);
  for (auto& [m, p] : a.comp)
    for (int j = 0; j < a.n; ++j) {
      if (!(m >> j & 1)) continue;
      Poly<S> c = x.comp[j] * p;
      if (detail::contract_sign(m, j) < 0) c = -c;
      out.add_mask(m & ~(std::uint32_t(1) << j), std::move(c));
    }
  return out;
}

// exterior derivative: d(p dx_I) = Σ_i ∂_i p · dx_i ∧ dx_I
template <typename S>
PolyForm<S> d(const PolyForm<S>& a) {
  PolyForm<S> out(a.n);
  for (auto& [m, p] : a.comp)
    for (int i = 0; i < a.n; ++i) {
      std::uint32_t bit = std::uint32_t(1) << i;
      if (m & bit) continue;
      Poly<S> c = p.derivative(i + 1);
      if (c.is_zero()) continue;
      if (detail::wedge_sign(bit, m) < 0) c = -c;
      out.add_mask(m | bit, std::move(c));
    }
  return out;
}

template <typename S>
void require_closed_twist(const PolyForm<S>& h) {
  if (!h.is_zero() && (!h.is_homogeneous() || h.grade() != 3))
    throw std::invalid_argument("twist H must be a 3-form");
  if (!d(h).is_zero()) throw std::invalid_argument("twist H must be closed");
}

// d_H = d − H∧·
template <typename S>
PolyForm<S> d_H(const PolyForm<S>& a, const PolyForm<S>& h) {
  require_closed_twist(h);
  return d(a) - wedge(h, a);
}

// Lie derivative by Leibniz on coefficients and coframe factors; the Cartan
// identity ℒ_X = i_X∘d + d∘i_X is a theorem for this definition, not its
// statement.
template <typename S>
PolyForm<S> lie_form(const PolyField<S>& x, const PolyForm<S>& a) {
  if (x.n != a.n) throw std::invalid_argument("lie_form: chart mismatch");
  PolyForm<S> out(a.n);
  for (auto& [m, p] : a.comp) {
    out.add_mask(m, apply_field(x, p));
    for (int j = 0; j < a.n; ++j) {
      if (!(m >> j & 1)) continue;
      std::uint32_t rest = m & ~(std::uint32_t(1) << j);
      // dx_j ↦ dX_j = Σ_k ∂_k X_j dx_k in place
      for (int k = 0; k < a.n; ++k) {
        if (rest >> k & 1) continue;
        Poly<S> c = p * x.comp[j].derivative(k + 1);
        if (c.is_zero()) continue;
        int sign = detail::contract_sign(m, j) *
                   detail::wedge_sign(std::uint32_t(1) << k, rest);
        if (sign < 0) c = -c;
        out.add_mask(rest | (std::uint32_t(1) << k), std::move(c));
      }
    }
  }
  return out;
}

// Section X + ξ of the split chart bundle; ξ is a 1-form.
template <typename S>
struct PolySection {
  PolyField<S> x;
  PolyForm<S> xi;

  PolySection() = default;
  PolySection(PolyField<S> field, PolyForm<S> form) : x(std::move(field)), xi(std::move(form)) {
    if (x.n != xi.n) throw std::invalid_argument("PolySection: chart mismatch");
    if (!xi.is_zero() && (!xi.is_homogeneous() || xi.grade() != 1))
      throw std::invalid_argument("PolySection: form part must be a 1-form");
  }

  friend bool operator==(const PolySection& a, const PolySection& b) {
    return a.x == b.x && a.xi == b.xi;
  }
};

// ⟦X+ξ, Y+η⟧_H = [X,Y] + ℒ_X η − i_Y(dξ − i_X H)
template <typename S>
PolySection<S> courant_bracket(const PolySection<S>& s1, const PolySection<S>& s2,
                               const PolyForm<S>& h) {
  require_closed_twist(h);
  auto form = lie_form(s1.x, s2.xi) - contract(s2.x, d(s1.xi) - contract(s1.x, h));
  return PolySection<S>(lie_bracket(s1.x, s2.x), std::move(form));
}

// (X,B)·(Y+η) = [X,Y] + ℒ_X η − i_Y B
template <typename S>
PolySection<S> derivation_action(const PolyField<S>& x, const PolyForm<S>& b,
                                 const PolySection<S>& s) {
  if (!b.is_zero() && (!b.is_homogeneous() || b.grade() != 2))
    throw std::invalid_argument("derivation_action: B must be a 2-form");
  return PolySection<S>(lie_bracket(x, s.x), lie_form(x, s.xi) - contract(s.x, b));
}

// ---- affine chart maps and the Σ_A action ----

template <typename S>
struct AffineMap {
  Matrix<S> a;
  Vector<S> b;

  AffineMap() : a(zero_matrix<S>(0, 0)), b(zero_vector<S>(0)) {}
  AffineMap(Matrix<S> lin, Vector<S> off) : a(std::move(lin)), b(std::move(off)) {
    if (a.rows() != a.cols() || a.rows() != b.size())
      throw std::invalid_argument("AffineMap: shape mismatch");
  }
  static AffineMap identity(int n) {
    return AffineMap(identity_matrix<S>(n), zero_vector<S>(n));
  }
  int dim() const { return static_cast<int>(b.size()); }
  Vector<S> apply(const Vector<S>& x) const { return a * x + b; }

  friend AffineMap compose(const AffineMap& f, const AffineMap& g) {  // f∘g
    return AffineMap(Matrix<S>(f.a * g.a), Vector<S>(f.a * g.b + f.b));
  }
  friend bool operator==(const AffineMap& f, const AffineMap& g) {
    return f.a == g.a && f.b == g.b;
  }
};

template <typename S>
AffineMap<S> inverse(const AffineMap<S>& f) {
  auto ainv = inverse(f.a);
  if (!ainv) throw std::invalid_argument("AffineMap: not invertible");
  return AffineMap<S>(*ainv, Vector<S>(-(*ainv * f.b)));
}

// ψ*α: substitute coordinates in coefficients and dx_i ↦ Σ_j A(i,j) dx_j
template <typename S>
PolyForm<S> pullback(const AffineMap<S>& psi, const PolyForm<S>& alpha) {
  const int n = alpha.n;
  if (psi.dim() != n) throw std::invalid_argument("pullback: chart mismatch");
  std::vector<Poly<S>> subs;
  for (int i = 0; i < n; ++i) {
    Poly<S> s = Poly<S>::constant(n, psi.b(i));
    for (int j = 0; j < n; ++j) s += Poly<S>::variable(n, j + 1) * psi.a(i, j);
    subs.push_back(std::move(s));
  }
  PolyForm<S> out(n);
  for (auto& [m, p] : alpha.comp) {
    PolyForm<S> term = PolyForm<S>::scalar(n, p.substitute(subs));
    for (int i = 0; i < n; ++i) {
      if (!(m >> i & 1)) continue;
      PolyForm<S> img(n);
      for (int j = 0; j < n; ++j)
        img.add_mask(std::uint32_t(1) << j, Poly<S>::constant(n, psi.a(i, j)));
      term = wedge(term, img);
    }
    out += term;
  }
  return out;
}

template <typename S>
PolyForm<S> exp_wedge(const PolyForm<S>& b) {
  if (!b.is_zero() && (!b.is_homogeneous() || b.grade() != 2))
    throw std::invalid_argument("exp_wedge: need a 2-form");
  PolyForm<S> out = PolyForm<S>::one(b.n);
  PolyForm<S> power = PolyForm<S>::one(b.n);
  S fact(1);
  for (int k = 1; 2 * k <= b.n; ++k) {
    power = wedge(power, b);
    if (power.is_zero()) break;
    fact = fact * S(k);
    out += power * (S(1) / fact);
  }
  return out;
}

// Σ_A = (ψ⁻¹)* ∘ e^{−B}
template <typename S>
PolyForm<S> sigma_action(const AffineMap<S>& psi, const PolyForm<S>& b,
                         const PolyForm<S>& alpha) {
  return pullback(inverse(psi), wedge(exp_wedge(-b), alpha));
}

// ---- integrability checks ----

// dω + H = 0, cross-checked by Courant closure of the graph frame {∂_i + i_{∂_i}ω}.
template <typename S>
bool graph_integrability(const PolyForm<S>& omega, const PolyForm<S>& h) {
  if (!omega.is_zero() && (!omega.is_homogeneous() || omega.grade() != 2))
    throw std::invalid_argument("graph_integrability: ω must be a 2-form");
  require_closed_twist(h);
  const int n = omega.n;
  bool route_forms = (d(omega) + h).is_zero();

  bool route_frame = true;
  std::vector<PolySection<S>> frame;
  for (int i = 1; i <= n; ++i) {
    auto x = PolyField<S>::basis(n, i);
    frame.emplace_back(x, contract(x, omega));
  }
  for (int i = 0; i < n && route_frame; ++i)
    for (int j = 0; j < n && route_frame; ++j) {
      auto br = courant_bracket(frame[i], frame[j], h);
      // bracket lies in the graph iff its form part is i_Z ω for its own X part
      if (!(br.xi - contract(br.x, omega)).is_zero()) route_frame = false;
    }
  if (route_forms != route_frame)
    throw std::logic_error("graph_integrability: routes disagree");
  return route_forms;
}

struct SpinorPointCheck {
  bool nonzero = false;
  bool pure = false;
  bool member = false;
};

// At each sample point, check that d_Hφ evaluated there lies in the span of
// {Π(e_a)φ} over the split fiber basis.
template <typename S>
std::vector<SpinorPointCheck> spinor_integrability(const PolyForm<S>& phi,
                                                   const PolyForm<S>& h,
                                                   const std::vector<Vector<S>>& points) {
  const int n = phi.n;
  auto dphi = d_H(phi, h);
  std::vector<SpinorPointCheck> out;
  for (auto& x : points) {
    SpinorPointCheck chk;
    auto phix = phi.eval(x);
    if (!phix.is_zero()) {
      chk.nonzero = true;
      chk.pure = is_pure(phix);
      auto target = dphi.eval(x);
      const Eigen::Index rows = Eigen::Index(1) << n;
      Matrix<S> cols = zero_matrix<S>(rows, 2 * n);
      for (int k = 0; k < 2 * n; ++k) {
        Vector<S> e = zero_vector<S>(2 * n);
        e(k) = S(1);
        auto img = clifford_act(e, phix);
        for (auto& [mask, c] : img.comp) cols(static_cast<Eigen::Index>(mask), k) = c;
      }
      Matrix<S> aug = zero_matrix<S>(rows, 2 * n + 1);
      aug.leftCols(2 * n) = cols;
      for (auto& [mask, c] : target.comp) aug(static_cast<Eigen::Index>(mask), 2 * n) = c;
      chk.member = rank(cols) == rank(aug);
    }
    out.push_back(chk);
  }
  return out;
}

// ---- moment one-form conditions ----

template <typename S>
struct MomentReport {
  std::vector<bool> twist_compatible;            // (i) dξ_i − i_{u_i}H = 0
  std::vector<std::vector<bool>> equivariant;    // (ii) ξ([u_i,u_j]) = ℒ_{u_i}ξ_j
  std::vector<bool> isotropic;                   // (iii) i_{u_i}ξ_i = 0
  bool brackets_match = true;                    // [u_i,u_j] = Σ_k c_{ij}^k u_k
  bool all_pass() const {
    if (!brackets_match) return false;
    for (bool b : twist_compatible)
      if (!b) return false;
    for (auto& row : equivariant)
      for (bool b : row)
        if (!b) return false;
    for (bool b : isotropic)
      if (!b) return false;
    return true;
  }
};

// structure[i][j] holds the coefficients of [u_i,u_j] over the generators.
template <typename S>
MomentReport<S> moment_conditions(const PolyForm<S>& h, const std::vector<PolyForm<S>>& xi,
                                  const std::vector<PolyField<S>>& u,
                                  const std::vector<std::vector<std::vector<S>>>& structure) {
  require_closed_twist(h);
  const int r = static_cast<int>(u.size());
  if (static_cast<int>(xi.size()) != r || static_cast<int>(structure.size()) != r)
    throw std::invalid_argument("moment_conditions: generator count mismatch");
  MomentReport<S> rep;
  for (int i = 0; i < r; ++i)
    rep.twist_compatible.push_back((d(xi[i]) - contract(u[i], h)).is_zero());
  for (int i = 0; i < r; ++i) {
    rep.equivariant.emplace_back();
    if (static_cast<int>(structure[i].size()) != r)
      throw std::invalid_argument("moment_conditions: structure constants shape");
    for (int j = 0; j < r; ++j) {
      if (static_cast<int>(structure[i][j].size()) != r)
        throw std::invalid_argument("moment_conditions: structure constants shape");
      PolyForm<S> xibr = PolyForm<S>::zero(h.n);
      PolyField<S> ubr = PolyField<S>::zero(h.n);
      for (int k = 0; k < r; ++k) {
        xibr += xi[k] * structure[i][j][k];
        for (int c = 0; c < h.n; ++c)
          ubr.comp[c] += u[k].comp[c] * Poly<S>::constant(h.n, structure[i][j][k]);
      }
      rep.equivariant[i].push_back(xibr == lie_form(u[i], xi[j]));
      if (!(lie_bracket(u[i], u[j]) == ubr)) rep.brackets_match = false;
    }
  }
  for (int i = 0; i < r; ++i) rep.isotropic.push_back(contract(u[i], xi[i]).is_zero());
  return rep;
}

// j*ξ = 0 on a chart submanifold: each ξ_i, evaluated at each sample point,
// annihilates the supplied tangent rows.
template <typename S>
std::vector<bool> admissible_at(const std::vector<PolyForm<S>>& xi, const Matrix<S>& tangent,
                                const std::vector<Vector<S>>& points) {
  std::vector<bool> out;
  for (auto& x : points) {
    bool ok = true;
    for (auto& form : xi) {
      Vector<S> cov = form.eval(x).grade1_coords();
      for (Eigen::Index k = 0; k < tangent.rows() && ok; ++k) {
        S acc(0);
        for (Eigen::Index c = 0; c < tangent.cols(); ++c) acc += cov(c) * tangent(k, c);
        if (!is_zero(acc)) ok = false;
      }
      if (!ok) break;
    }
    out.push_back(ok);
  }
  return out;
}

// ---- T-duality on invariant forms ----

// Correspondence chart (base…, t1 = x_{n−1}, t2 = x_n); θ_i = dt_i + a_i with
// base 1-forms a_i.  τφ is the dt₁-coefficient of e^{θ₁∧θ₂}∧φ, weighted by
// (−1)^degree per term and re-expressed on the (base, t2) chart of dimension
// n−1.  The alternating weight is forced: the bare coefficient extraction
// anti-commutes the twisted differentials (the sign enters through d crossing
// the appended θ₂ factor), and only a parity-alternating extraction makes
// τ∘d_{H₁} = d_{H₂}∘τ hold on the nose.  With this convention τ(1) = θ₂ and
// τ(θ₁) = −1; the orientation flag negates τ globally, giving the convention
// with τ(θ₁) = 1 and τ(1) = −θ₂ instead.
template <typename S>
PolyForm<S> tduality_map(const PolyForm<S>& phi, const PolyForm<S>& a1, const PolyForm<S>& a2,
                         bool flip_orientation = false) {
  const int n = phi.n;
  if (n < 3) throw std::invalid_argument("tduality_map: need base + two circle directions");
  if (a1.n != n || a2.n != n) throw std::invalid_argument("tduality_map: chart mismatch");
  const int t1 = n - 1, t2 = n;  // 1-based coordinates
  const std::uint32_t bit1 = std::uint32_t(1) << (t1 - 1);
  const std::uint32_t bit2 = std::uint32_t(1) << (t2 - 1);

  auto check_invariant = [&](const PolyForm<S>& f, bool allow_t_factors) {
    for (auto& [m, p] : f.comp) {
      if (p.degree_in(t1) != 0 || p.degree_in(t2) != 0)
        throw std::invalid_argument("tduality_map: not invariant (t-dependent coefficient)");
      if (!allow_t_factors && (m & (bit1 | bit2)))
        throw std::invalid_argument("tduality_map: a_i must be base forms");
    }
  };
  check_invariant(phi, true);
  check_invariant(a1, false);
  check_invariant(a2, false);
  if (!a1.is_zero() && (!a1.is_homogeneous() || a1.grade() != 1))
    throw std::invalid_argument("tduality_map: a1 must be a 1-form");
  if (!a2.is_zero() && (!a2.is_homogeneous() || a2.grade() != 1))
    throw std::invalid_argument("tduality_map: a2 must be a 1-form");

  auto theta1 = a1 + PolyForm<S>::term(n, {t1}, S(1));
  auto theta2 = a2 + PolyForm<S>::term(n, {t2}, S(1));
  auto big = phi + wedge(wedge(theta1, theta2), phi);  // e^{θ₁∧θ₂}∧φ

  PolyForm<S> out(n - 1);
  for (auto& [m, p] : big.comp) {
    if (!(m & bit1)) continue;
    std::uint32_t rest = m & ~bit1;
    int sign = detail::contract_sign(m, t1 - 1);
    if (std::popcount(m) % 2 != 0) sign = -sign;
    // reindex: base bits stay; t2 becomes coordinate n−1, whose bit value
    // coincides with bit1
    std::uint32_t newmask = (rest & (bit1 - 1)) | ((rest & bit2) ? bit1 : 0);
    // rebuild the coefficient on the smaller chart (no t-dependence by check)
    Poly<S> q(n - 1);
    for (auto& [k, c] : p.terms) q.add_term(k, c);
    if (sign < 0) q = -q;
    if (flip_orientation) q = -q;
    out.add_mask(newmask, std::move(q));
  }
  return out;
}

}  // namespace purespin

#endif  // PURESPIN_POLYFORM_HPP
