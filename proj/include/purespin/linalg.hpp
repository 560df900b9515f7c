#ifndef PURESPIN_LINALG_HPP
#define PURESPIN_LINALG_HPP

#include <Eigen/Core>

#include <optional>
#include <stdexcept>
#include <vector>

#include "purespin/scalar.hpp"

namespace Eigen {

template <>
struct NumTraits<purespin::Rational> {
  typedef purespin::Rational Real;
  typedef purespin::Rational NonInteger;
  typedef purespin::Rational Nested;
  typedef purespin::Rational Literal;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 16,
    MulCost = 16
  };
  static inline Real epsilon() { return purespin::Rational(0); }
  static inline Real dummy_precision() { return purespin::Rational(0); }
  static inline int digits10() { return 0; }
};

template <>
struct NumTraits<purespin::Gaussian> {
  typedef purespin::Gaussian Real;
  typedef purespin::Gaussian NonInteger;
  typedef purespin::Gaussian Nested;
  typedef purespin::Gaussian Literal;
  enum {
    IsComplex = 0,  // conjugation is handled explicitly, not through Eigen
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 16,
    AddCost = 32,
    MulCost = 32
  };
  static inline Real epsilon() { return purespin::Gaussian(0); }
  static inline Real dummy_precision() { return purespin::Gaussian(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace purespin {

template <typename S>
using Matrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <typename S>
using Vector = Eigen::Matrix<S, Eigen::Dynamic, 1>;

template <typename S>
Matrix<S> zero_matrix(Eigen::Index r, Eigen::Index c) {
  return Matrix<S>::Constant(r, c, S(0));
}

template <typename S>
Vector<S> zero_vector(Eigen::Index n) {
  return Vector<S>::Constant(n, S(0));
}

template <typename S>
Matrix<S> identity_matrix(Eigen::Index n) {
  Matrix<S> m = zero_matrix<S>(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = S(1);
  return m;
}

template <typename S>
struct Echelon {
  Matrix<S> rows;              // reduced row-echelon form, zero rows dropped
  std::vector<int> pivots;     // pivot column per row
};

// Gauss-Jordan over an exact field; the result is the canonical RREF, so two
// spanning sets give byte-identical matrices exactly when they span the same
// space.
template <typename S>
Echelon<S> rref(Matrix<S> m) {
  const Eigen::Index rows = m.rows(), cols = m.cols();
  std::vector<int> pivots;
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index piv = -1;
    for (Eigen::Index i = r; i < rows; ++i) {
      if (!is_zero(m(i, c))) { piv = i; break; }
    }
    if (piv < 0) continue;
    if (piv != r) m.row(piv).swap(m.row(r));
    S inv = S(1) / m(r, c);
    for (Eigen::Index j = c; j < cols; ++j) m(r, j) = m(r, j) * inv;
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i == r || is_zero(m(i, c))) continue;
      S f = m(i, c);
      for (Eigen::Index j = c; j < cols; ++j) m(i, j) = m(i, j) - f * m(r, j);
    }
    pivots.push_back(static_cast<int>(c));
    ++r;
  }
  Echelon<S> out;
  out.rows = m.topRows(r);
  out.pivots = std::move(pivots);
  return out;
}

template <typename S>
Eigen::Index rank(const Matrix<S>& m) {
  return rref(m).rows.rows();
}

// Canonical basis (as rows) of the right nullspace {x : m x = 0}.
template <typename S>
Matrix<S> nullspace(const Matrix<S>& m) {
  const Eigen::Index cols = m.cols();
  Echelon<S> e = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (int p : e.pivots) is_pivot[p] = true;
  std::vector<int> free_cols;
  for (Eigen::Index c = 0; c < cols; ++c)
    if (!is_pivot[c]) free_cols.push_back(static_cast<int>(c));
  Matrix<S> basis = zero_matrix<S>(static_cast<Eigen::Index>(free_cols.size()), cols);
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    int f = free_cols[k];
    basis(k, f) = S(1);
    for (Eigen::Index r = 0; r < e.rows.rows(); ++r)
      basis(k, e.pivots[r]) = -e.rows(r, f);
  }
  return rref(basis).rows;
}

// Particular solution of A x = b with free variables set to zero; nullopt if
// the system is inconsistent.
template <typename S>
std::optional<Vector<S>> solve(const Matrix<S>& a, const Vector<S>& b) {
  if (a.rows() != b.size()) throw std::invalid_argument("solve: shape mismatch");
  Matrix<S> aug = zero_matrix<S>(a.rows(), a.cols() + 1);
  aug.leftCols(a.cols()) = a;
  aug.col(a.cols()) = b;
  Echelon<S> e = rref(std::move(aug));
  Vector<S> x = zero_vector<S>(a.cols());
  for (Eigen::Index r = 0; r < e.rows.rows(); ++r) {
    if (e.pivots[r] == a.cols()) return std::nullopt;  // 0 = 1 row
    x(e.pivots[r]) = e.rows(r, a.cols());
  }
  return x;
}

template <typename S>
std::optional<Matrix<S>> solve_matrix(const Matrix<S>& a, const Matrix<S>& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("solve_matrix: shape mismatch");
  Matrix<S> x = zero_matrix<S>(a.cols(), b.cols());
  for (Eigen::Index c = 0; c < b.cols(); ++c) {
    auto col = solve<S>(a, b.col(c));
    if (!col) return std::nullopt;
    x.col(c) = *col;
  }
  return x;
}

template <typename S>
std::optional<Matrix<S>> inverse(const Matrix<S>& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse: not square");
  if (rank(a) != a.rows()) return std::nullopt;
  return solve_matrix(a, identity_matrix<S>(a.rows()));
}

template <typename S>
S determinant(Matrix<S> m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant: not square");
  const Eigen::Index n = m.rows();
  S det(1);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index piv = -1;
    for (Eigen::Index i = c; i < n; ++i)
      if (!is_zero(m(i, c))) { piv = i; break; }
    if (piv < 0) return S(0);
    if (piv != c) {
      m.row(piv).swap(m.row(c));
      det = -det;
    }
    det *= m(c, c);
    S inv = S(1) / m(c, c);
    for (Eigen::Index i = c + 1; i < n; ++i) {
      if (is_zero(m(i, c))) continue;
      S f = m(i, c) * inv;
      for (Eigen::Index j = c; j < n; ++j) m(i, j) = m(i, j) - f * m(c, j);
    }
  }
  return det;
}

template <typename S>
Matrix<S> conj_matrix(Matrix<S> m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = conj_scalar(m(i, j));
  return m;
}

}  // namespace purespin

#endif  // PURESPIN_LINALG_HPP
