#pragma once

// Dense linear algebra over a coefficient ring (FiniteField or WittRing).
// Rank, kernels and determinants are only ever taken over the residue field.

#include <concepts>
#include <cstddef>
#include <optional>
#include <vector>

#include "muhasse/arith.hpp"
#include "muhasse/errors.hpp"
#include "muhasse/matrix.hpp"

namespace muhasse {

template <class R>
concept CoefficientRing = requires(const R& ring, const typename R::Element& x, typename R::Element& acc,
                                   long e) {
  { ring.zero() } -> std::same_as<typename R::Element>;
  { ring.one() } -> std::same_as<typename R::Element>;
  { ring.add(x, x) } -> std::same_as<typename R::Element>;
  { ring.sub(x, x) } -> std::same_as<typename R::Element>;
  { ring.neg(x) } -> std::same_as<typename R::Element>;
  { ring.mul(x, x) } -> std::same_as<typename R::Element>;
  ring.add_product(acc, x, x);
  { ring.frobenius(x, e) } -> std::same_as<typename R::Element>;
  { ring.is_zero(x) } -> std::same_as<bool>;
  { ring.frobenius_order() } -> std::convertible_to<unsigned>;
  { ring.residue_field() } -> std::same_as<const FiniteField&>;
  { ring.reduce(x) } -> std::same_as<Residue>;
};

template <CoefficientRing Ring>
Matrix<typename Ring::Element> zero_matrix(const Ring& ring, std::size_t rows, std::size_t cols) {
  return Matrix<typename Ring::Element>(rows, cols, ring.zero());
}

template <CoefficientRing Ring>
Matrix<typename Ring::Element> identity_matrix(const Ring& ring, std::size_t n) {
  auto out = zero_matrix(ring, n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = ring.one();
  return out;
}

template <CoefficientRing Ring>
Matrix<typename Ring::Element> multiply(const Ring& ring, const Matrix<typename Ring::Element>& x,
                                        const Matrix<typename Ring::Element>& y) {
  if (x.cols() != y.rows()) throw PreconditionError("matrix product: inner dimensions differ");
  auto out = zero_matrix(ring, x.rows(), y.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t t = 0; t < x.cols(); ++t) {
      const auto& xv = x(i, t);
      if (ring.is_zero(xv)) continue;
      for (std::size_t j = 0; j < y.cols(); ++j) ring.add_product(out(i, j), xv, y(t, j));
    }
  return out;
}

template <CoefficientRing Ring>
std::vector<typename Ring::Element> multiply(const Ring& ring, const Matrix<typename Ring::Element>& x,
                                             const std::vector<typename Ring::Element>& v) {
  if (x.cols() != v.size()) throw PreconditionError("matrix-vector product: dimension mismatch");
  std::vector<typename Ring::Element> out(x.rows(), ring.zero());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t t = 0; t < x.cols(); ++t) ring.add_product(out[i], x(i, t), v[t]);
  return out;
}

template <CoefficientRing Ring>
Matrix<typename Ring::Element> add(const Ring& ring, const Matrix<typename Ring::Element>& x,
                                   const Matrix<typename Ring::Element>& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) throw PreconditionError("matrix sum: shape mismatch");
  auto out = x;
  for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] = ring.add(x.data()[i], y.data()[i]);
  return out;
}

template <CoefficientRing Ring>
Matrix<typename Ring::Element> negate(const Ring& ring, Matrix<typename Ring::Element> x) {
  for (auto& v : x.data()) v = ring.neg(v);
  return x;
}

template <CoefficientRing Ring>
Matrix<typename Ring::Element> frobenius(const Ring& ring, Matrix<typename Ring::Element> x, long e) {
  if (e % static_cast<long>(ring.frobenius_order()) == 0) return x;
  for (auto& v : x.data()) v = ring.frobenius(v, e);
  return x;
}

template <CoefficientRing Ring>
std::vector<typename Ring::Element> frobenius(const Ring& ring, std::vector<typename Ring::Element> v, long e) {
  if (e % static_cast<long>(ring.frobenius_order()) == 0) return v;
  for (auto& x : v) x = ring.frobenius(x, e);
  return v;
}

template <CoefficientRing Ring>
Matrix<Residue> reduce(const Ring& ring, const Matrix<typename Ring::Element>& x) {
  Matrix<Residue> out(x.rows(), x.cols(), Residue{});
  for (std::size_t i = 0; i < x.data().size(); ++i) out.data()[i] = ring.reduce(x.data()[i]);
  return out;
}

template <CoefficientRing Ring>
Matrix<typename Ring::Element> scalar_matrix(const Ring& ring, std::size_t n, const typename Ring::Element& c) {
  auto out = zero_matrix(ring, n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = c;
  return out;
}

/// Characteristic polynomial det(T·I − M) by the division-free Samuelson–Berkowitz
/// recursion; valid over any commutative ring, including W_N with zero divisors.
/// Returns coefficients c_0, ..., c_n (c_n = 1).
template <CoefficientRing Ring>
std::vector<typename Ring::Element> characteristic_polynomial(const Ring& ring,
                                                              const Matrix<typename Ring::Element>& m) {
  using E = typename Ring::Element;
  if (!m.is_square()) throw PreconditionError("characteristic polynomial of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return {ring.one()};
  // p holds the leading-first coefficients of the trailing principal block.
  std::vector<E> p = {ring.one(), ring.neg(m(n - 1, n - 1))};
  for (std::size_t i = n - 1; i-- > 0;) {
    const std::size_t s = n - 1 - i;  // size of trailing block
    std::vector<E> col(s + 2, ring.zero());
    col[0] = ring.one();
    col[1] = ring.neg(m(i, i));
    std::vector<E> v(s, ring.zero());
    for (std::size_t t = 0; t < s; ++t) v[t] = m(i + 1 + t, i);
    for (std::size_t j = 0; j < s; ++j) {
      E dot = ring.zero();
      for (std::size_t t = 0; t < s; ++t) ring.add_product(dot, m(i, i + 1 + t), v[t]);
      col[j + 2] = ring.neg(dot);
      if (j + 1 < s) {
        std::vector<E> next(s, ring.zero());
        for (std::size_t r = 0; r < s; ++r)
          for (std::size_t t = 0; t < s; ++t) ring.add_product(next[r], m(i + 1 + r, i + 1 + t), v[t]);
        v = std::move(next);
      }
    }
    std::vector<E> q(s + 2, ring.zero());
    for (std::size_t t = 0; t < s + 2; ++t)
      for (std::size_t u = 0; u <= std::min(t, s); ++u) ring.add_product(q[t], col[t - u], p[u]);
    p = std::move(q);
  }
  // leading-first -> c_0 first
  return {p.rbegin(), p.rend()};
}

/// Product of two polynomials given low-degree-first.
template <CoefficientRing Ring>
std::vector<typename Ring::Element> polynomial_product(const Ring& ring,
                                                       const std::vector<typename Ring::Element>& x,
                                                       const std::vector<typename Ring::Element>& y) {
  std::vector<typename Ring::Element> out(x.size() + y.size() - 1, ring.zero());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) ring.add_product(out[i + j], x[i], y[j]);
  return out;
}

// ---------------------------------------------------------------------------
// Residue-field elimination

struct RowEchelon {
  Matrix<Residue> reduced;            // reduced row echelon form
  std::vector<std::size_t> pivots;    // pivot column of each nonzero row
  std::size_t rank() const { return pivots.size(); }
};

RowEchelon row_echelon(const FiniteField& field, Matrix<Residue> m);
std::size_t rank(const FiniteField& field, const Matrix<Residue>& m);

/// Kernel basis from the reduced row echelon form: one vector per free column,
/// equal to 1 at that column and 0 at every other free column.
std::vector<std::vector<Residue>> nullspace(const FiniteField& field, const Matrix<Residue>& m);

/// Free (non-pivot) columns in increasing order, matching `nullspace`.
std::vector<std::size_t> free_columns(const RowEchelon& echelon, std::size_t cols);

Residue determinant(const FiniteField& field, Matrix<Residue> m);
std::optional<Matrix<Residue>> inverse(const FiniteField& field, const Matrix<Residue>& m);

/// Inverse over W_N; throws PreconditionError unless the matrix is invertible mod ℓ.
Matrix<RingElement> inverse(const WittRing& ring, const Matrix<RingElement>& m);

}  // namespace muhasse
