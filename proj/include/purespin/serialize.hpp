#ifndef PURESPIN_SERIALIZE_HPP
#define PURESPIN_SERIALIZE_HPP

#include <cctype>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "purespin/dirac.hpp"
#include "purespin/gcs.hpp"
#include "purespin/polyform.hpp"
#include "purespin/scalar.hpp"
#include "purespin/subspace.hpp"

namespace purespin {

// Deserialization failure with a location-bearing message.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Every scalar travels as an exact string ("p/q" or "p/q+r/si"); integer JSON
// numbers are accepted for convenience, floating-point literals never are.
template <typename S>
S scalar_from_json(const nlohmann::json& j, const std::string& where) {
  if (j.is_string()) {
    try {
      return parse_scalar<S>(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  if (j.is_number_integer()) return S(j.get<long long>());
  if (j.is_number_float())
    throw ParseError(where + ": floating-point literal rejected, exact scalars only");
  throw ParseError(where + ": expected a scalar string");
}

template <typename S>
nlohmann::json vector_to_json(const Vector<S>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_string(v(i)));
  return out;
}

template <typename S>
Vector<S> vector_from_json(const nlohmann::json& j, const std::string& where,
                           int expected = -1) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of scalars");
  if (expected >= 0 && static_cast<int>(j.size()) != expected)
    throw ParseError(where + ": expected length " + std::to_string(expected));
  Vector<S> v = zero_vector<S>(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) =
        scalar_from_json<S>(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

template <typename S>
nlohmann::json matrix_to_json(const Matrix<S>& m) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    out.push_back(vector_to_json(Vector<S>(m.row(i).transpose())));
  return out;
}

// `cols` disambiguates the width of a matrix with no rows.
template <typename S>
Matrix<S> matrix_from_json(const nlohmann::json& j, const std::string& where, int cols = -1) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of rows");
  if (j.empty()) {
    if (cols < 0) throw ParseError(where + ": cannot infer width of an empty matrix");
    return zero_matrix<S>(0, cols);
  }
  const int w = cols >= 0 ? cols : static_cast<int>(j[0].size());
  Matrix<S> m = zero_matrix<S>(static_cast<Eigen::Index>(j.size()), w);
  for (std::size_t i = 0; i < j.size(); ++i)
    m.row(static_cast<Eigen::Index>(i)) =
        vector_from_json<S>(j[i], where + "[" + std::to_string(i) + "]", w).transpose();
  return m;
}

inline nlohmann::json ambient_to_json(const Ambient& a) {
  return {{"kind", a.is_split() ? "split" : "plain"}, {"n", a.n}};
}

inline Ambient ambient_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("kind") || !j.contains("n"))
    throw ParseError(where + ": ambient needs 'kind' and 'n'");
  const std::string kind = j["kind"].get<std::string>();
  if (!j["n"].is_number_integer()) throw ParseError(where + ": ambient 'n' must be an integer");
  const int n = j["n"].get<int>();
  try {
    if (kind == "plain") return Ambient::plain(n);
    if (kind == "split") return Ambient::split(n);
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
  throw ParseError(where + ": ambient kind must be 'plain' or 'split'");
}

template <typename S>
nlohmann::json subspace_to_json(const Subspace<S>& s) {
  return {{"ambient", ambient_to_json(s.ambient)}, {"rows", matrix_to_json(s.rows)}};
}

template <typename S>
Subspace<S> subspace_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("ambient") || !j.contains("rows"))
    throw ParseError(where + ": subspace needs 'ambient' and 'rows'");
  Ambient amb = ambient_from_json(j["ambient"], where + ".ambient");
  Matrix<S> rows = matrix_from_json<S>(j["rows"], where + ".rows", amb.dim());
  try {
    return Subspace<S>::span(amb, rows);
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
}

// index-set keys look like "[1,3]"; "[]" is the scalar component
inline std::uint32_t mask_from_string(const std::string& key, int dim,
                                      const std::string& where) {
  if (key.size() < 2 || key.front() != '[' || key.back() != ']')
    throw ParseError(where + ": bad index set '" + key + "'");
  std::vector<int> idx;
  std::string cur;
  for (std::size_t k = 1; k + 1 < key.size(); ++k) {
    if (key[k] == ',') {
      if (cur.empty()) throw ParseError(where + ": bad index set '" + key + "'");
      idx.push_back(std::stoi(cur));
      cur.clear();
    } else if (std::isdigit(static_cast<unsigned char>(key[k]))) {
      cur += key[k];
    } else {
      throw ParseError(where + ": bad index set '" + key + "'");
    }
  }
  if (!cur.empty()) idx.push_back(std::stoi(cur));
  try {
    return detail::indices_to_mask(idx, dim);
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": '" + key + "': " + e.what());
  }
}

template <typename S>
nlohmann::json multielement_to_json(const MultiElement<S>& a) {
  nlohmann::json terms = nlohmann::json::object();
  for (auto& [mask, c] : a.comp) terms[detail::mask_to_indices(mask)] = to_string(c);
  return {{"dim", a.space.dim}, {"dual", a.space.dual}, {"terms", terms}};
}

template <typename S>
MultiElement<S> multielement_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("dual") || !j.contains("terms"))
    throw ParseError(where + ": multielement needs 'dim', 'dual', 'terms'");
  if (!j["dim"].is_number_integer() || !j["dual"].is_boolean() || !j["terms"].is_object())
    throw ParseError(where + ": malformed multielement");
  BasedSpace sp;
  try {
    sp = BasedSpace(j["dim"].get<int>(), j["dual"].get<bool>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
  MultiElement<S> out(sp);
  for (auto& [key, val] : j["terms"].items())
    out.add_mask(mask_from_string(key, sp.dim, where),
                 scalar_from_json<S>(val, where + "." + key));
  return out;
}

template <typename S>
nlohmann::json datum_to_json(const ReductionDatum<S>& d) {
  nlohmann::json cov = nlohmann::json::array();
  for (auto& xi : d.moment_covectors) cov.push_back(vector_to_json(xi));
  return {{"m", d.m},
          {"tangent_n", subspace_to_json(d.tangentN)},
          {"vertical", subspace_to_json(d.vertical)},
          {"delta", multielement_to_json(d.delta)},
          {"moment_covectors", cov},
          {"b", multielement_to_json(d.B)}};
}

template <typename S>
ReductionDatum<S> datum_from_json(const nlohmann::json& j, const std::string& where) {
  for (const char* key : {"m", "tangent_n", "vertical", "delta", "moment_covectors", "b"})
    if (!j.is_object() || !j.contains(key))
      throw ParseError(where + ": datum needs '" + std::string(key) + "'");
  ReductionDatum<S> d;
  if (!j["m"].is_number_integer()) throw ParseError(where + ".m: expected an integer");
  d.m = j["m"].get<int>();
  d.tangentN = subspace_from_json<S>(j["tangent_n"], where + ".tangent_n");
  d.vertical = subspace_from_json<S>(j["vertical"], where + ".vertical");
  d.delta = multielement_from_json<S>(j["delta"], where + ".delta");
  if (!j["moment_covectors"].is_array())
    throw ParseError(where + ".moment_covectors: expected an array");
  for (std::size_t i = 0; i < j["moment_covectors"].size(); ++i)
    d.moment_covectors.push_back(vector_from_json<S>(
        j["moment_covectors"][i], where + ".moment_covectors[" + std::to_string(i) + "]",
        d.m));
  d.B = multielement_from_json<S>(j["b"], where + ".b");
  try {
    validate_datum(d);
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
  return d;
}

inline nlohmann::json gcs_to_json(const GCStructure& gc) {
  return {{"j", matrix_to_json(gc.j)}};
}

inline GCStructure gcs_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("j")) throw ParseError(where + ": needs a matrix 'j'");
  Matrix<Rational> m = matrix_from_json<Rational>(j["j"], where + ".j");
  try {
    return make_gcs(m);
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
}

// ---- polynomial strings -----------------------------------------------------
// Grammar (whitespace ignored): signed terms separated by top-level +/-, each a
// '*'-product of factors; a factor is a parenthesized scalar, a bare scalar
// literal, or x<k>[^<e>].  This accepts everything Poly::str() emits.

template <typename S>
std::string poly_to_string(const Poly<S>& p) {
  return p.str();
}

template <typename S>
Poly<S> poly_from_string(int nvars, const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  Poly<S> out(nvars);
  if (t.empty() || t == "0") return out;

  std::vector<std::pair<int, std::string>> terms;
  {
    int depth = 0, sign = 1;
    std::string cur;
    for (std::size_t k = 0; k < t.size(); ++k) {
      char c = t[k];
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (depth < 0) throw ParseError("polynomial '" + text + "': unbalanced ')'");
      if (k == 0 && (c == '+' || c == '-')) {
        sign = c == '-' ? -1 : 1;
        continue;
      }
      if (depth == 0 && (c == '+' || c == '-') && k > 0) {
        char prev = t[k - 1];
        if (std::isalnum(static_cast<unsigned char>(prev)) || prev == ')') {
          terms.emplace_back(sign, cur);
          cur.clear();
          sign = c == '-' ? -1 : 1;
          continue;
        }
      }
      cur += c;
    }
    if (depth != 0) throw ParseError("polynomial '" + text + "': unbalanced '('");
    terms.emplace_back(sign, cur);
  }

  for (auto& [sign, term] : terms) {
    if (term.empty()) throw ParseError("polynomial '" + text + "': empty term");
    Poly<S> acc = Poly<S>::constant(nvars, S(sign));
    std::vector<std::string> factors;
    {
      int depth = 0;
      std::string cur;
      for (char c : term) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == '*' && depth == 0) {
          factors.push_back(cur);
          cur.clear();
        } else {
          cur += c;
        }
      }
      factors.push_back(cur);
    }
    try {
      for (auto& f : factors) {
        if (f.empty()) throw std::invalid_argument("empty factor");
        if (f.front() == '(' && f.back() == ')') {
          acc = acc * Poly<S>::constant(nvars, parse_scalar<S>(f.substr(1, f.size() - 2)));
        } else if (f.front() == 'x' && f.size() > 1 &&
                   std::isdigit(static_cast<unsigned char>(f[1]))) {
          std::size_t caret = f.find('^');
          int idx = std::stoi(f.substr(1, caret == std::string::npos ? std::string::npos
                                                                     : caret - 1));
          int exp = caret == std::string::npos ? 1 : std::stoi(f.substr(caret + 1));
          if (exp < 1) throw std::invalid_argument("exponent must be positive");
          for (int e = 0; e < exp; ++e) acc = acc * Poly<S>::variable(nvars, idx);
        } else {
          acc = acc * Poly<S>::constant(nvars, parse_scalar<S>(f));
        }
      }
    } catch (const std::invalid_argument& e) {
      throw ParseError("polynomial '" + text + "', term '" + term + "': " + e.what());
    }
    out += acc;
  }
  return out;
}

template <typename S>
nlohmann::json polyform_to_json(const PolyForm<S>& f) {
  nlohmann::json terms = nlohmann::json::object();
  for (auto& [mask, p] : f.comp) terms[detail::mask_to_indices(mask)] = poly_to_string(p);
  return {{"n", f.n}, {"terms", terms}};
}

template <typename S>
PolyForm<S> polyform_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("n") || !j.contains("terms"))
    throw ParseError(where + ": polyform needs 'n' and 'terms'");
  if (!j["n"].is_number_integer() || !j["terms"].is_object())
    throw ParseError(where + ": malformed polyform");
  const int n = j["n"].get<int>();
  PolyForm<S> out;
  try {
    out = PolyForm<S>(n);
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
  for (auto& [key, val] : j["terms"].items()) {
    if (!val.is_string()) throw ParseError(where + "." + key + ": expected a polynomial string");
    out.add_mask(mask_from_string(key, n, where),
                 poly_from_string<S>(n, val.template get<std::string>()));
  }
  return out;
}

// Exactness guard: the only scalar modes this artifact runs in.  Anything else
// (in particular "float64") is refused outright rather than approximated.
inline void require_exact_mode(const std::string& mode, const std::string& where) {
  if (mode != "exact-rational" && mode != "gaussian-rational")
    throw ParseError(where + ": scalar_mode '" + mode +
                     "' would require rounding; only 'exact-rational' and "
                     "'gaussian-rational' are supported");
}

}  // namespace purespin

#endif  // PURESPIN_SERIALIZE_HPP
