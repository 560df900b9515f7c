#ifndef PURESPIN_SCALAR_HPP
#define PURESPIN_SCALAR_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <iosfwd>
#include <sstream>
#include <stdexcept>
#include <string>

namespace purespin {

// Exact rational scalar. Thin wrapper around boost's cpp_rational so that
// Eigen's expression machinery never sees boost's promiscuous converting
// constructors (they trip template-metaprogramming loops on some toolchains).
struct Rational {
  using rep = boost::multiprecision::cpp_rational;
  rep v;

  Rational() : v(0) {}
  Rational(long long n) : v(n) {}
  Rational(int n) : v(n) {}
  Rational(long long num, long long den) : v(num, den) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  }
  explicit Rational(rep r) : v(std::move(r)) {}

  bool is_zero() const { return v.is_zero(); }

  Rational operator-() const { return Rational(rep(-v)); }
  Rational& operator+=(const Rational& o) { v += o.v; return *this; }
  Rational& operator-=(const Rational& o) { v -= o.v; return *this; }
  Rational& operator*=(const Rational& o) { v *= o.v; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::invalid_argument("Rational: division by zero");
    v /= o.v;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend bool operator==(const Rational& a, const Rational& b) { return a.v == b.v; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v != b.v; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v < b.v; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v > b.v; }

  std::string str() const {
    std::ostringstream os;
    os << v;
    return os.str();
  }
};

// a + b*i with exact rational a, b.  Conjugation is the field involution
// used for complexified fibers.
struct Gaussian {
  Rational re, im;

  Gaussian() = default;
  Gaussian(Rational r) : re(std::move(r)) {}
  Gaussian(long long n) : re(n) {}
  Gaussian(int n) : re(n) {}
  Gaussian(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  static Gaussian i() { return Gaussian(Rational(0), Rational(1)); }

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  Gaussian conj() const { return Gaussian(re, -im); }

  Gaussian operator-() const { return Gaussian(-re, -im); }
  Gaussian& operator+=(const Gaussian& o) { re += o.re; im += o.im; return *this; }
  Gaussian& operator-=(const Gaussian& o) { re -= o.re; im -= o.im; return *this; }
  Gaussian& operator*=(const Gaussian& o) {
    Rational r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = r;
    return *this;
  }
  Gaussian& operator/=(const Gaussian& o) {
    if (o.is_zero()) throw std::invalid_argument("Gaussian: division by zero");
    Rational n = o.re * o.re + o.im * o.im;
    Gaussian num = *this * o.conj();
    re = num.re / n;
    im = num.im / n;
    return *this;
  }

  friend Gaussian operator+(Gaussian a, const Gaussian& b) { return a += b; }
  friend Gaussian operator-(Gaussian a, const Gaussian& b) { return a -= b; }
  friend Gaussian operator*(Gaussian a, const Gaussian& b) { return a *= b; }
  friend Gaussian operator/(Gaussian a, const Gaussian& b) { return a /= b; }
  friend bool operator==(const Gaussian& a, const Gaussian& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const Gaussian& a, const Gaussian& b) { return !(a == b); }
};

template <typename S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
  static constexpr bool is_complex = false;
  static constexpr const char* mode_name = "exact-rational";
  static Rational conj(const Rational& s) { return s; }
  static Rational imaginary_unit() {
    throw std::invalid_argument("exact-rational mode has no imaginary unit; use gaussian-rational");
  }
};

template <>
struct scalar_traits<Gaussian> {
  static constexpr bool is_complex = true;
  static constexpr const char* mode_name = "gaussian-rational";
  static Gaussian conj(const Gaussian& s) { return s.conj(); }
  static Gaussian imaginary_unit() { return Gaussian::i(); }
};

template <typename S>
S conj_scalar(const S& s) {
  return scalar_traits<S>::conj(s);
}

inline bool is_zero(const Rational& s) { return s.is_zero(); }
inline bool is_zero(const Gaussian& s) { return s.is_zero(); }

// ---- string formats -------------------------------------------------------
// Rationals serialize as "p/q" ("p" when q = 1); gaussian rationals as
// "p/q+r/si" with the imaginary part omitted when zero.

std::string to_string(const Rational& s);
std::string to_string(const Gaussian& s);
Rational parse_rational(const std::string& text);
Gaussian parse_gaussian(const std::string& text);

template <typename S>
S parse_scalar(const std::string& text);
template <>
inline Rational parse_scalar<Rational>(const std::string& text) { return parse_rational(text); }
template <>
inline Gaussian parse_scalar<Gaussian>(const std::string& text) { return parse_gaussian(text); }

inline std::string to_string(const Rational& s) { return s.str(); }

inline std::string to_string(const Gaussian& s) {
  if (s.im.is_zero()) return to_string(s.re);
  std::string out = to_string(s.re);
  std::string im = to_string(s.im);
  if (!im.empty() && im[0] == '-') {
    out += im;
  } else {
    out += "+" + im;
  }
  return out + "i";
}

namespace detail {
inline Rational parse_rational_part(std::string text) {
  if (!text.empty() && text[0] == '+') text = text.substr(1);
  if (text.empty()) throw std::invalid_argument("empty scalar literal");
  std::size_t slash = text.find('/');
  try {
    boost::multiprecision::cpp_int num, den(1);
    if (slash == std::string::npos) {
      num = boost::multiprecision::cpp_int(text);
    } else {
      num = boost::multiprecision::cpp_int(text.substr(0, slash));
      den = boost::multiprecision::cpp_int(text.substr(slash + 1));
    }
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(Rational::rep(num, den));
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("malformed rational literal: '" + text + "'");
  }
}
}  // namespace detail

inline Rational parse_rational(const std::string& text) {
  std::string t;
  for (char c : text)
    if (c != ' ') t += c;
  return detail::parse_rational_part(t);
}

inline Gaussian parse_gaussian(const std::string& text) {
  std::string t;
  for (char c : text)
    if (c != ' ') t += c;
  if (t.empty()) throw std::invalid_argument("empty scalar literal");
  if (t.back() != 'i') return Gaussian(detail::parse_rational_part(t));
  t.pop_back();
  if (t.empty() || t == "+") return Gaussian(Rational(0), Rational(1));
  if (t == "-") return Gaussian(Rational(0), Rational(-1));
  // Split at the sign that separates real and imaginary parts (skip the
  // leading sign of the real part).
  std::size_t split = std::string::npos;
  for (std::size_t k = t.size(); k-- > 1;) {
    if ((t[k] == '+' || t[k] == '-') && t[k - 1] != '/' && t[k - 1] != '+' && t[k - 1] != '-') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) {
    return Gaussian(Rational(0), detail::parse_rational_part(t));
  }
  Rational re = detail::parse_rational_part(t.substr(0, split));
  std::string imtext = t.substr(split);
  if (imtext == "+") return Gaussian(re, Rational(1));
  if (imtext == "-") return Gaussian(re, Rational(-1));
  return Gaussian(re, detail::parse_rational_part(imtext));
}

inline std::ostream& operator<<(std::ostream& os, const Rational& s) {
  return os << to_string(s);
}
inline std::ostream& operator<<(std::ostream& os, const Gaussian& s) {
  return os << to_string(s);
}

}  // namespace purespin

#endif  // PURESPIN_SCALAR_HPP
