#ifndef PURESPIN_EXTERIOR_HPP
#define PURESPIN_EXTERIOR_HPP

#include <bit>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "purespin/linalg.hpp"
#include "purespin/scalar.hpp"

namespace purespin {

// A based space with the implicit standard ordered basis e_1..e_n (dual: the
// coframe e^1..e^n).  The cap keeps every suite brute-forceable.
struct BasedSpace {
  int dim = 0;
  bool dual = false;

  BasedSpace() = default;
  BasedSpace(int n, bool dual_flag = false) : dim(n), dual(dual_flag) {
    if (n < 1 || n > 8) throw std::invalid_argument("BasedSpace: dim must be in 1..8");
  }

  BasedSpace dual_space() const {
    BasedSpace d(dim, !dual);
    return d;
  }

  friend bool operator==(const BasedSpace& a, const BasedSpace& b) {
    return a.dim == b.dim && a.dual == b.dual;
  }
  friend bool operator!=(const BasedSpace& a, const BasedSpace& b) { return !(a == b); }
};

namespace detail {

// Sign of e_A ∧ e_B for disjoint increasing index sets given as bit masks:
// parity of the number of transpositions needed to sort the concatenation.
inline int wedge_sign(std::uint32_t a, std::uint32_t b) {
  int inversions = 0;
  for (std::uint32_t bits = b; bits; bits &= bits - 1) {
    std::uint32_t low = bits & ~(bits - 1);
    // count elements of a strictly above this element of b
    inversions += std::popcount(a & ~(low | (low - 1)));
  }
  return (inversions % 2 == 0) ? 1 : -1;
}

// Sign of i_{e_k} acting on the term e_M (k assumed in M): (-1)^{#{j∈M : j<k}}.
inline int contract_sign(std::uint32_t m, int k) {
  std::uint32_t below = m & ((std::uint32_t(1) << k) - 1);
  return (std::popcount(below) % 2 == 0) ? 1 : -1;
}

inline std::string mask_to_indices(std::uint32_t m) {
  std::string out = "[";
  bool first = true;
  for (int i = 0; i < 32; ++i) {
    if (!(m >> i & 1)) continue;
    if (!first) out += ",";
    out += std::to_string(i + 1);
    first = false;
  }
  return out + "]";
}

inline std::uint32_t indices_to_mask(const std::vector<int>& idx, int dim) {
  std::uint32_t m = 0;
  for (int i : idx) {
    if (i < 1 || i > dim) throw std::invalid_argument("index out of range");
    std::uint32_t bit = std::uint32_t(1) << (i - 1);
    if (m & bit) throw std::invalid_argument("repeated index");
    m |= bit;
  }
  return m;
}

}  // namespace detail

// Sparse element of the exterior algebra ΛV (or ΛV*).  Keys are bit masks of
// strictly increasing index subsets; only nonzero coefficients are stored.
template <typename S>
struct MultiElement {
  BasedSpace space;
  std::map<std::uint32_t, S> comp;

  MultiElement() = default;
  explicit MultiElement(BasedSpace sp) : space(sp) {}

  static MultiElement zero(BasedSpace sp) { return MultiElement(sp); }
  static MultiElement scalar(BasedSpace sp, S c) {
    MultiElement m(sp);
    m.set_mask(0, std::move(c));
    return m;
  }
  static MultiElement one(BasedSpace sp) { return scalar(sp, S(1)); }
  static MultiElement basis(BasedSpace sp, int i) {
    if (i < 1 || i > sp.dim) throw std::invalid_argument("basis index out of range");
    MultiElement m(sp);
    m.set_mask(std::uint32_t(1) << (i - 1), S(1));
    return m;
  }
  static MultiElement term(BasedSpace sp, const std::vector<int>& idx, S c) {
    MultiElement m(sp);
    m.set_mask(detail::indices_to_mask(idx, sp.dim), std::move(c));
    return m;
  }
  // grade-1 element with the given coordinate vector
  static MultiElement vector(BasedSpace sp, const Vector<S>& coords) {
    if (coords.size() != sp.dim) throw std::invalid_argument("coordinate size mismatch");
    MultiElement m(sp);
    for (int i = 0; i < sp.dim; ++i) m.set_mask(std::uint32_t(1) << i, coords(i));
    return m;
  }

  void set_mask(std::uint32_t mask, S c) {
    if (purespin::is_zero(c))
      comp.erase(mask);
    else
      comp[mask] = std::move(c);
  }
  void add_mask(std::uint32_t mask, const S& c) {
    auto it = comp.find(mask);
    if (it == comp.end()) {
      if (!purespin::is_zero(c)) comp.emplace(mask, c);
      return;
    }
    it->second += c;
    if (purespin::is_zero(it->second)) comp.erase(it);
  }
  S coeff(std::uint32_t mask) const {
    auto it = comp.find(mask);
    return it == comp.end() ? S(0) : it->second;
  }
  S coeff(const std::vector<int>& idx) const {
    return coeff(detail::indices_to_mask(idx, space.dim));
  }

  bool is_zero() const { return comp.empty(); }

  bool is_homogeneous() const {
    int g = -1;
    for (auto& [m, c] : comp) {
      int k = std::popcount(m);
      if (g < 0) g = k;
      if (k != g) return false;
    }
    return true;
  }
  // grade of a homogeneous element (0 for the zero element)
  int grade() const {
    if (comp.empty()) return 0;
    if (!is_homogeneous()) throw std::invalid_argument("grade of inhomogeneous element");
    return std::popcount(comp.begin()->first);
  }
  MultiElement grade_part(int k) const {
    MultiElement out(space);
    for (auto& [m, c] : comp)
      if (std::popcount(m) == k) out.comp.emplace(m, c);
    return out;
  }
  int max_grade() const {
    int g = 0;
    for (auto& [m, c] : comp) g = std::max(g, std::popcount(m));
    return g;
  }

  // grade-1 part as a coordinate vector
  Vector<S> grade1_coords() const {
    Vector<S> v = zero_vector<S>(space.dim);
    for (auto& [m, c] : comp)
      if (std::popcount(m) == 1) v(std::countr_zero(m)) = c;
    return v;
  }

  MultiElement operator-() const {
    MultiElement out(space);
    for (auto& [m, c] : comp) out.comp.emplace(m, -c);
    return out;
  }
  MultiElement& operator+=(const MultiElement& o) {
    if (space != o.space) throw std::invalid_argument("space mismatch");
    for (auto& [m, c] : o.comp) add_mask(m, c);
    return *this;
  }
  MultiElement& operator-=(const MultiElement& o) {
    if (space != o.space) throw std::invalid_argument("space mismatch");
    for (auto& [m, c] : o.comp) add_mask(m, -c);
    return *this;
  }
  MultiElement& operator*=(const S& c) {
    if (purespin::is_zero(c)) {
      comp.clear();
      return *this;
    }
    for (auto& [m, v] : comp) v *= c;
    return *this;
  }

  friend MultiElement operator+(MultiElement a, const MultiElement& b) { return a += b; }
  friend MultiElement operator-(MultiElement a, const MultiElement& b) { return a -= b; }
  friend MultiElement operator*(MultiElement a, const S& c) { return a *= c; }
  friend MultiElement operator*(const S& c, MultiElement a) { return a *= c; }
  friend bool operator==(const MultiElement& a, const MultiElement& b) {
    return a.space == b.space && a.comp == b.comp;
  }
  friend bool operator!=(const MultiElement& a, const MultiElement& b) { return !(a == b); }

  std::string str() const {
    if (comp.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto& [m, c] : comp) {
      if (!first) out += " + ";
      out += "(" + to_string(c) + ")";
      if (m) out += "*e" + detail::mask_to_indices(m);
      first = false;
    }
    return out;
  }
};

template <typename S>
MultiElement<S> wedge(const MultiElement<S>& a, const MultiElement<S>& b) {
  if (a.space != b.space) throw std::invalid_argument("wedge: space mismatch");
  MultiElement<S> out(a.space);
  for (auto& [ma, ca] : a.comp) {
    for (auto& [mb, cb] : b.comp) {
      if (ma & mb) continue;
      S c = ca * cb;
      if (detail::wedge_sign(ma, mb) < 0) c = -c;
      out.add_mask(ma | mb, c);
    }
  }
  return out;
}

// Interior product i_x a for x of grade 1 in the dual of a's space (the
// pairing of e_i with e^j is δ_ij in the standard bases).
template <typename S>
MultiElement<S> contract(const MultiElement<S>& x, const MultiElement<S>& a) {
  if (x.space.dim != a.space.dim || x.space.dual == a.space.dual)
    throw std::invalid_argument("contract: need grade-1 element of the dual space");
  if (!x.is_zero() && (!x.is_homogeneous() || x.grade() != 1))
    throw std::invalid_argument("contract: first argument must have grade 1");
  MultiElement<S> out(a.space);
  for (auto& [mx, cx] : x.comp) {
    int k = std::countr_zero(mx);
    for (auto& [ma, ca] : a.comp) {
      if (!(ma >> k & 1)) continue;
      S c = cx * ca;
      if (detail::contract_sign(ma, k) < 0) c = -c;
      out.add_mask(ma & ~mx, c);
    }
  }
  return out;
}

// i_{e_J} with the highest index applied innermost (first), extended
// bilinearly over general multivectors in the dual algebra.
template <typename S>
MultiElement<S> contract_multi(const MultiElement<S>& xs, const MultiElement<S>& a) {
  if (xs.space.dim != a.space.dim || xs.space.dual == a.space.dual)
    throw std::invalid_argument("contract_multi: need element of the dual space");
  MultiElement<S> out(a.space);
  for (auto& [mx, cx] : xs.comp) {
    MultiElement<S> cur = a;
    for (int k = 31; k >= 0 && !cur.is_zero(); --k) {
      if (!(mx >> k & 1)) continue;
      MultiElement<S> unit(xs.space);
      unit.set_mask(std::uint32_t(1) << k, S(1));
      cur = contract(unit, cur);
    }
    out += cur * cx;
  }
  return out;
}

template <typename S>
MultiElement<S> exp_two_form(const MultiElement<S>& b) {
  if (!b.is_zero() && (!b.is_homogeneous() || b.grade() != 2))
    throw std::invalid_argument("exp_two_form: input must be homogeneous of grade 2");
  MultiElement<S> out = MultiElement<S>::one(b.space);
  MultiElement<S> power = MultiElement<S>::one(b.space);
  S factorial(1);
  for (int k = 1; 2 * k <= b.space.dim; ++k) {
    power = wedge(power, b);
    if (power.is_zero()) break;
    factorial *= S(k);
    out += power * (S(1) / factorial);
  }
  return out;
}

// Extension of the linear map with matrix f (columns = images of basis
// vectors) to an algebra homomorphism ΛV → ΛW.
template <typename S>
MultiElement<S> push_linear(const Matrix<S>& f, const MultiElement<S>& a) {
  if (f.cols() != a.space.dim) throw std::invalid_argument("push_linear: shape mismatch");
  BasedSpace target(static_cast<int>(f.rows()), a.space.dual);
  std::vector<MultiElement<S>> images;
  images.reserve(a.space.dim);
  for (int i = 0; i < a.space.dim; ++i)
    images.push_back(MultiElement<S>::vector(target, f.col(i)));
  MultiElement<S> out(target);
  for (auto& [m, c] : a.comp) {
    MultiElement<S> term = MultiElement<S>::scalar(target, c);
    for (int i = 0; i < a.space.dim && !term.is_zero(); ++i)
      if (m >> i & 1) term = wedge(term, images[i]);
    out += term;
  }
  return out;
}

}  // namespace purespin

#endif  // PURESPIN_EXTERIOR_HPP
