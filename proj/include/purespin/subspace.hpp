#ifndef PURESPIN_SUBSPACE_HPP
#define PURESPIN_SUBSPACE_HPP

#include <stdexcept>
#include <string>

#include "purespin/exterior.hpp"
#include "purespin/linalg.hpp"

namespace purespin {

// Ambient of a subspace: either a plain based space of dimension n or the
// split fiber V⊕V* (dimension 2n) with the canonical symmetric pairing
// ⟨X+ξ, Y+η⟩ = η(X)+ξ(Y).  Split coordinates: first n entries are the V
// part, last n the V* part.
struct Ambient {
  enum class Kind { plain, split };
  Kind kind = Kind::plain;
  int n = 0;

  Ambient() = default;
  static Ambient plain(int n) {
    if (n < 1 || n > 8) throw std::invalid_argument("Ambient: dim must be in 1..8");
    Ambient a;
    a.kind = Kind::plain;
    a.n = n;
    return a;
  }
  static Ambient split(int n) {
    if (n < 1 || n > 8) throw std::invalid_argument("Ambient: split dim 2n must be <= 16");
    Ambient a;
    a.kind = Kind::split;
    a.n = n;
    return a;
  }
  int dim() const { return kind == Kind::split ? 2 * n : n; }
  bool is_split() const { return kind == Kind::split; }

  friend bool operator==(const Ambient& a, const Ambient& b) {
    return a.kind == b.kind && a.n == b.n;
  }
  friend bool operator!=(const Ambient& a, const Ambient& b) { return !(a == b); }
};

struct SplitFiber {
  int n;
  explicit SplitFiber(int n_) : n(n_) { Ambient::split(n_); }
  Ambient ambient() const { return Ambient::split(n); }
};

// Gram matrix of the canonical pairing: [[0, I], [I, 0]].
template <typename S>
Matrix<S> split_gram(int n) {
  Matrix<S> g = zero_matrix<S>(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    g(i, n + i) = S(1);
    g(n + i, i) = S(1);
  }
  return g;
}

template <typename S>
S split_pairing(const Vector<S>& u, const Vector<S>& v) {
  if (u.size() != v.size() || u.size() % 2 != 0)
    throw std::invalid_argument("split_pairing: bad dimensions");
  int n = static_cast<int>(u.size()) / 2;
  S out(0);
  for (int i = 0; i < n; ++i) out += u(i) * v(n + i) + u(n + i) * v(i);
  return out;
}

// Subspace in canonical reduced row-echelon representation: equality of
// subspaces is equality of representations.
template <typename S>
struct Subspace {
  Ambient ambient;
  Matrix<S> rows;  // RREF, zero rows dropped

  Subspace() : rows(zero_matrix<S>(0, 0)) {}

  static Subspace span(Ambient amb, const Matrix<S>& spanning_rows) {
    if (spanning_rows.cols() != amb.dim() && spanning_rows.rows() != 0)
      throw std::invalid_argument("Subspace: row length != ambient dim");
    Subspace s;
    s.ambient = amb;
    if (spanning_rows.rows() == 0)
      s.rows = zero_matrix<S>(0, amb.dim());
    else
      s.rows = rref(spanning_rows).rows;
    return s;
  }
  static Subspace zero(Ambient amb) { return span(amb, zero_matrix<S>(0, amb.dim())); }
  static Subspace full(Ambient amb) { return span(amb, identity_matrix<S>(amb.dim())); }
  static Subspace span_vectors(Ambient amb, const std::vector<Vector<S>>& vs) {
    Matrix<S> m = zero_matrix<S>(static_cast<Eigen::Index>(vs.size()), amb.dim());
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (vs[i].size() != amb.dim()) throw std::invalid_argument("Subspace: vector length");
      m.row(static_cast<Eigen::Index>(i)) = vs[i].transpose();
    }
    return span(amb, m);
  }

  int dim() const { return static_cast<int>(rows.rows()); }

  bool contains(const Vector<S>& v) const {
    if (v.size() != ambient.dim()) throw std::invalid_argument("contains: bad vector length");
    Matrix<S> stacked = zero_matrix<S>(rows.rows() + 1, ambient.dim());
    stacked.topRows(rows.rows()) = rows;
    stacked.row(rows.rows()) = v.transpose();
    return rank(stacked) == rows.rows();
  }
  bool contains(const Subspace& other) const {
    if (ambient != other.ambient) throw std::invalid_argument("contains: ambient mismatch");
    Matrix<S> stacked = zero_matrix<S>(rows.rows() + other.rows.rows(), ambient.dim());
    stacked.topRows(rows.rows()) = rows;
    stacked.bottomRows(other.rows.rows()) = other.rows;
    return rank(stacked) == rows.rows();
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient == b.ambient && a.rows == b.rows;
  }
  friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }
};

template <typename S>
Subspace<S> sum(const Subspace<S>& a, const Subspace<S>& b) {
  if (a.ambient != b.ambient) throw std::invalid_argument("sum: ambient mismatch");
  Matrix<S> stacked = zero_matrix<S>(a.rows.rows() + b.rows.rows(), a.ambient.dim());
  stacked.topRows(a.rows.rows()) = a.rows;
  stacked.bottomRows(b.rows.rows()) = b.rows;
  return Subspace<S>::span(a.ambient, stacked);
}

template <typename S>
Subspace<S> intersect(const Subspace<S>& a, const Subspace<S>& b) {
  if (a.ambient != b.ambient) throw std::invalid_argument("intersect: ambient mismatch");
  const Eigen::Index ra = a.rows.rows(), rb = b.rows.rows();
  if (ra == 0 || rb == 0) return Subspace<S>::zero(a.ambient);
  // v = aᵀx = bᵀy  ⟺  [aᵀ | −bᵀ](x;y) = 0
  Matrix<S> sys = zero_matrix<S>(a.ambient.dim(), ra + rb);
  sys.leftCols(ra) = a.rows.transpose();
  sys.rightCols(rb) = -b.rows.transpose();
  Matrix<S> null = nullspace(sys);  // rows = (x;y) solutions
  Matrix<S> vecs = zero_matrix<S>(null.rows(), a.ambient.dim());
  for (Eigen::Index k = 0; k < null.rows(); ++k)
    vecs.row(k) = (a.rows.transpose() * null.row(k).head(ra).transpose()).transpose();
  return Subspace<S>::span(a.ambient, vecs);
}

template <typename S>
Subspace<S> perp(const Subspace<S>& s) {
  if (!s.ambient.is_split()) throw std::invalid_argument("perp: ambient is not a split fiber");
  if (s.dim() == 0) return Subspace<S>::full(s.ambient);
  Matrix<S> constraints = s.rows * split_gram<S>(s.ambient.n);
  return Subspace<S>::span(s.ambient, nullspace(constraints));
}

template <typename S>
bool is_isotropic(const Subspace<S>& s) {
  if (!s.ambient.is_split()) throw std::invalid_argument("is_isotropic: ambient not split");
  Matrix<S> p = s.rows * split_gram<S>(s.ambient.n) * s.rows.transpose();
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    for (Eigen::Index j = 0; j < p.cols(); ++j)
      if (!is_zero(p(i, j))) return false;
  return true;
}

template <typename S>
bool is_lagrangian(const Subspace<S>& s) {
  return is_isotropic(s) && s.dim() == s.ambient.n;
}

// Full antisymmetric coefficient matrix of a 2-form over V*: entry (i,j) is
// the coefficient of X_i in (i_X B)_j.
template <typename S>
Matrix<S> two_form_matrix(const MultiElement<S>& b, int n) {
  if (b.space.dim != n || !b.space.dual)
    throw std::invalid_argument("two_form_matrix: B must live in ΛV*");
  if (!b.is_zero() && (!b.is_homogeneous() || b.grade() != 2))
    throw std::invalid_argument("two_form_matrix: B must be a 2-form");
  Matrix<S> m = zero_matrix<S>(n, n);
  for (auto& [mask, c] : b.comp) {
    int i = std::countr_zero(mask);
    int j = std::countr_zero(mask & (mask - 1));
    m(i, j) = c;   // coefficient of e^{i+1}∧e^{j+1} with i < j
    m(j, i) = -c;
  }
  return m;
}

// X+ξ ↦ X + ξ + i_X B
template <typename S>
Vector<S> tau_B_vector(const MultiElement<S>& b, const Vector<S>& v) {
  int n = static_cast<int>(v.size()) / 2;
  Matrix<S> bm = two_form_matrix(b, n);
  Vector<S> out = v;
  // (i_X B)_j = Σ_i X_i B_{ij}
  for (int j = 0; j < n; ++j) {
    S acc(0);
    for (int i = 0; i < n; ++i) acc += v(i) * bm(i, j);
    out(n + j) += acc;
  }
  return out;
}

template <typename S>
Subspace<S> tau_B(const MultiElement<S>& b, const Subspace<S>& s) {
  if (!s.ambient.is_split()) throw std::invalid_argument("tau_B: ambient not split");
  Matrix<S> out = s.rows;
  for (Eigen::Index k = 0; k < out.rows(); ++k)
    out.row(k) = tau_B_vector(b, Vector<S>(s.rows.row(k).transpose())).transpose();
  return Subspace<S>::span(s.ambient, out);
}

template <typename S>
Subspace<S> conj(const Subspace<S>& s) {
  return Subspace<S>::span(s.ambient, conj_matrix(s.rows));
}

// Embeddings of V- and V*-side subspaces into the split fiber, and the
// projections p, s.
template <typename S>
Subspace<S> embed_v(const Matrix<S>& rows_v, int n) {
  Matrix<S> m = zero_matrix<S>(rows_v.rows(), 2 * n);
  m.leftCols(n) = rows_v;
  return Subspace<S>::span(Ambient::split(n), m);
}

template <typename S>
Subspace<S> embed_vstar(const Matrix<S>& rows_vstar, int n) {
  Matrix<S> m = zero_matrix<S>(rows_vstar.rows(), 2 * n);
  m.rightCols(n) = rows_vstar;
  return Subspace<S>::span(Ambient::split(n), m);
}

template <typename S>
Subspace<S> project_p(const Subspace<S>& s) {
  if (!s.ambient.is_split()) throw std::invalid_argument("project_p: ambient not split");
  int n = s.ambient.n;
  return Subspace<S>::span(Ambient::plain(n), Matrix<S>(s.rows.leftCols(n)));
}

template <typename S>
Subspace<S> project_s(const Subspace<S>& s) {
  if (!s.ambient.is_split()) throw std::invalid_argument("project_s: ambient not split");
  int n = s.ambient.n;
  return Subspace<S>::span(Ambient::plain(n), Matrix<S>(s.rows.rightCols(n)));
}

// Annihilator of a plain subspace inside the dual: covectors vanishing on it.
template <typename S>
Matrix<S> annihilator_rows(const Matrix<S>& rows, int n) {
  if (rows.rows() == 0) return identity_matrix<S>(n);
  return nullspace(Matrix<S>(rows));
}

// Canonical complement of W inside S: greedily take echelon basis rows of S
// that are independent of W (lexicographically first pivot set).
template <typename S>
Matrix<S> complement_in(const Subspace<S>& s, const Subspace<S>& w) {
  if (!s.contains(w)) throw std::invalid_argument("complement_in: W not contained in S");
  const int target = s.dim() - w.dim();
  Matrix<S> picked = zero_matrix<S>(target, s.ambient.dim());
  Matrix<S> stacked = zero_matrix<S>(w.rows.rows() + target, s.ambient.dim());
  stacked.topRows(w.rows.rows()) = w.rows;
  Eigen::Index have = 0;
  for (Eigen::Index k = 0; k < s.rows.rows() && have < target; ++k) {
    stacked.row(w.rows.rows() + have) = s.rows.row(k);
    if (rank(Matrix<S>(stacked.topRows(w.rows.rows() + have + 1))) ==
        w.rows.rows() + have + 1) {
      picked.row(have) = s.rows.row(k);
      ++have;
    }
  }
  if (have != target) throw std::logic_error("complement_in: failed to complete basis");
  return picked;
}

// Coordinates on S/W: `map` sends ambient coordinates of an element of S to
// quotient coordinates; `section` rows are representatives of the quotient
// basis inside S.  map·sectionᵀ = I and map·Wᵀ = 0.
template <typename S>
struct QuotientMap {
  Matrix<S> map;      // q × dim(ambient)
  Matrix<S> section;  // q × dim(ambient)
  int q = 0;

  Vector<S> coords(const Vector<S>& v) const { return map * v; }
};

template <typename S>
QuotientMap<S> quotient_coords(const Subspace<S>& s, const Subspace<S>& w) {
  if (s.ambient != w.ambient) throw std::invalid_argument("quotient_coords: ambient mismatch");
  if (!s.contains(w)) throw std::invalid_argument("quotient_coords: W not contained in S");
  const int q = s.dim() - w.dim();
  const int d = s.ambient.dim();
  QuotientMap<S> out;
  out.q = q;
  out.section = complement_in(s, w);
  out.map = zero_matrix<S>(q, d);
  // rows m_k with m_k·w = 0 for w ∈ W, m_k·c_j = δ_{kj}; canonical particular
  // solution (free variables zero) keeps serialization deterministic.
  Matrix<S> constraints = zero_matrix<S>(w.rows.rows() + q, d);
  constraints.topRows(w.rows.rows()) = w.rows;
  constraints.bottomRows(q) = out.section;
  for (int k = 0; k < q; ++k) {
    Vector<S> rhs = zero_vector<S>(constraints.rows());
    rhs(w.rows.rows() + k) = S(1);
    auto m = solve(constraints, rhs);
    if (!m) throw std::logic_error("quotient_coords: inconsistent system");
    out.map.row(k) = m->transpose();
  }
  return out;
}

}  // namespace purespin

#endif  // PURESPIN_SUBSPACE_HPP
