#ifndef PURESPIN_POLY_HPP
#define PURESPIN_POLY_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "purespin/linalg.hpp"
#include "purespin/scalar.hpp"

namespace purespin {

// Sparse polynomial in chart variables x1..xn with exact scalar coefficients.
// Exponent vectors are packed 4 bits per variable; total degree is capped at 8
// so every operation stays closed and exactly zero-testable.
template <typename S>
struct Poly {
  static constexpr int max_vars = 16;
  static constexpr int max_degree = 8;

  int nvars = 0;
  std::map<std::uint64_t, S> terms;  // packed exponents -> coefficient

  Poly() = default;
  explicit Poly(int n) : nvars(n) {
    if (n < 1 || n > max_vars) throw std::invalid_argument("Poly: 1..16 variables");
  }

  static int exponent(std::uint64_t key, int var) {
    return static_cast<int>(key >> (4 * var) & 0xF);
  }
  static int total_degree_of(std::uint64_t key) {
    int d = 0;
    while (key) {
      d += static_cast<int>(key & 0xF);
      key >>= 4;
    }
    return d;
  }

  static Poly zero(int n) { return Poly(n); }
  static Poly constant(int n, S c) {
    Poly p(n);
    p.add_term(0, std::move(c));
    return p;
  }
  // 1-based variable index
  static Poly variable(int n, int i) {
    if (i < 1 || i > n) throw std::invalid_argument("Poly: variable index out of range");
    Poly p(n);
    p.add_term(std::uint64_t(1) << (4 * (i - 1)), S(1));
    return p;
  }

  void add_term(std::uint64_t key, S c) {
    if (total_degree_of(key) > max_degree)
      throw std::invalid_argument("Poly: total degree exceeds the cap of 8");
    auto it = terms.find(key);
    if (it == terms.end()) {
      if (!purespin::is_zero(c)) terms.emplace(key, std::move(c));
    } else {
      it->second += c;
      if (purespin::is_zero(it->second)) terms.erase(it);
    }
  }

  S coeff(std::uint64_t key) const {
    auto it = terms.find(key);
    return it == terms.end() ? S(0) : it->second;
  }

  bool is_zero() const { return terms.empty(); }
  bool is_constant() const {
    return terms.empty() || (terms.size() == 1 && terms.begin()->first == 0);
  }
  int total_degree() const {
    int d = 0;
    for (auto& [k, c] : terms) d = std::max(d, total_degree_of(k));
    return d;
  }
  // degree in a single 1-based variable
  int degree_in(int i) const {
    int d = 0;
    for (auto& [k, c] : terms) d = std::max(d, exponent(k, i - 1));
    return d;
  }

  Poly& operator+=(const Poly& o) {
    check(o);
    for (auto& [k, c] : o.terms) add_term(k, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    check(o);
    for (auto& [k, c] : o.terms) add_term(k, S(-1) * c);
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  Poly operator-() const {
    Poly out(nvars);
    for (auto& [k, c] : terms) out.add_term(k, S(-1) * c);
    return out;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    a.check(b);
    Poly out(a.nvars);
    for (auto& [ka, ca] : a.terms)
      for (auto& [kb, cb] : b.terms) {
        for (int v = 0; v < a.nvars; ++v)
          if (exponent(ka, v) + exponent(kb, v) > max_degree)
            throw std::invalid_argument("Poly: product exceeds the degree cap");
        out.add_term(ka + kb, ca * cb);
      }
    return out;
  }
  friend Poly operator*(Poly a, const S& c) {
    Poly out(a.nvars);
    for (auto& [k, cc] : a.terms) out.add_term(k, cc * c);
    return out;
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    return a.nvars == b.nvars && a.terms == b.terms;
  }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  S eval(const Vector<S>& x) const {
    if (x.size() != nvars) throw std::invalid_argument("Poly::eval: point length");
    S out(0);
    for (auto& [k, c] : terms) {
      S term = c;
      for (int v = 0; v < nvars; ++v)
        for (int e = 0; e < exponent(k, v); ++e) term *= x(v);
      out += term;
    }
    return out;
  }

  // partial derivative with respect to the 1-based variable i
  Poly derivative(int i) const {
    if (i < 1 || i > nvars) throw std::invalid_argument("Poly::derivative: variable index");
    const int v = i - 1;
    Poly out(nvars);
    for (auto& [k, c] : terms) {
      int e = exponent(k, v);
      if (e == 0) continue;
      out.add_term(k - (std::uint64_t(1) << (4 * v)), c * S(e));
    }
    return out;
  }

  // substitute x_i -> subs[i] (each a polynomial in a common chart)
  Poly substitute(const std::vector<Poly>& subs) const {
    if (static_cast<int>(subs.size()) != nvars)
      throw std::invalid_argument("Poly::substitute: need one polynomial per variable");
    const int target = subs.empty() ? nvars : subs[0].nvars;
    Poly out = Poly::zero(target);
    for (auto& [k, c] : terms) {
      Poly term = Poly::constant(target, c);
      for (int v = 0; v < nvars; ++v)
        for (int e = 0; e < exponent(k, v); ++e) term = term * subs[v];
      out += term;
    }
    return out;
  }

  std::string str() const {
    if (terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto& [k, c] : terms) {
      std::string cs = to_string(c);
      if (!first) out += " + ";
      first = false;
      std::string mono;
      for (int v = 0; v < nvars; ++v) {
        int e = exponent(k, v);
        if (e == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += "x" + std::to_string(v + 1);
        if (e > 1) mono += "^" + std::to_string(e);
      }
      if (mono.empty()) {
        out += cs;
      } else if (cs == "1") {
        out += mono;
      } else {
        out += "(" + cs + ")*" + mono;
      }
    }
    return out;
  }

 private:
  void check(const Poly& o) const {
    if (nvars != o.nvars) throw std::invalid_argument("Poly: variable count mismatch");
  }
};

}  // namespace purespin

#endif  // PURESPIN_POLY_HPP
