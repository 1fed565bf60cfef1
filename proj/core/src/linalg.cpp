#include "muhasse/linalg.hpp"

#include <utility>

namespace muhasse {

RowEchelon row_echelon(const FiniteField& field, Matrix<Residue> m) {
  RowEchelon out;
  const std::size_t rows = m.rows(), cols = m.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && field.is_zero(m(piv, c))) ++piv;
    if (piv == rows) continue;
    if (piv != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(piv, j), m(r, j));
    const Residue inv = field.inverse(m(r, c));
    for (std::size_t j = c; j < cols; ++j) m(r, j) = field.mul(m(r, j), inv);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || field.is_zero(m(i, c))) continue;
      const Residue factor = field.neg(m(i, c));
      for (std::size_t j = c; j < cols; ++j) m(i, j) = field.add(m(i, j), field.mul(factor, m(r, j)));
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.reduced = std::move(m);
  return out;
}

std::size_t rank(const FiniteField& field, const Matrix<Residue>& m) { return row_echelon(field, m).rank(); }

std::vector<std::size_t> free_columns(const RowEchelon& echelon, std::size_t cols) {
  std::vector<std::size_t> out;
  std::size_t k = 0;
  for (std::size_t c = 0; c < cols; ++c) {
    if (k < echelon.pivots.size() && echelon.pivots[k] == c) {
      ++k;
      continue;
    }
    out.push_back(c);
  }
  return out;
}

std::vector<std::vector<Residue>> nullspace(const FiniteField& field, const Matrix<Residue>& m) {
  const RowEchelon e = row_echelon(field, m);
  const auto free = free_columns(e, m.cols());
  std::vector<std::vector<Residue>> basis;
  basis.reserve(free.size());
  for (std::size_t f : free) {
    std::vector<Residue> v(m.cols(), field.zero());
    v[f] = field.one();
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = field.neg(e.reduced(r, f));
    basis.push_back(std::move(v));
  }
  return basis;
}

Residue determinant(const FiniteField& field, Matrix<Residue> m) {
  if (!m.is_square()) throw PreconditionError("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  Residue det = field.one();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && field.is_zero(m(piv, c))) ++piv;
    if (piv == n) return field.zero();
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
      det = field.neg(det);
    }
    det = field.mul(det, m(c, c));
    const Residue inv = field.inverse(m(c, c));
    for (std::size_t i = c + 1; i < n; ++i) {
      if (field.is_zero(m(i, c))) continue;
      const Residue factor = field.neg(field.mul(m(i, c), inv));
      for (std::size_t j = c; j < n; ++j) m(i, j) = field.add(m(i, j), field.mul(factor, m(c, j)));
    }
  }
  return det;
}

std::optional<Matrix<Residue>> inverse(const FiniteField& field, const Matrix<Residue>& m) {
  if (!m.is_square()) throw PreconditionError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  Matrix<Residue> aug(n, 2 * n, field.zero());
  aug.set_block(0, 0, m);
  for (std::size_t i = 0; i < n; ++i) aug(i, n + i) = field.one();
  const RowEchelon e = row_echelon(field, std::move(aug));
  if (e.rank() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
  return e.reduced.block(0, n, n, n);
}

Matrix<RingElement> inverse(const WittRing& ring, const Matrix<RingElement>& m) {
  if (!m.is_square()) throw PreconditionError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  Matrix<RingElement> a = m;
  Matrix<RingElement> inv = identity_matrix(ring, n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && !ring.is_unit(a(piv, c))) ++piv;
    if (piv == n) throw PreconditionError("matrix is not invertible over the Witt ring");
    if (piv != c)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(c, j));
        std::swap(inv(piv, j), inv(c, j));
      }
    const RingElement pinv = ring.inverse(a(c, c));
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) = ring.mul(a(c, j), pinv);
      inv(c, j) = ring.mul(inv(c, j), pinv);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || ring.is_zero(a(i, c))) continue;
      const RingElement factor = ring.neg(a(i, c));
      for (std::size_t j = 0; j < n; ++j) {
        ring.add_product(a(i, j), factor, a(c, j));
        ring.add_product(inv(i, j), factor, inv(c, j));
      }
    }
  }
  return inv;
}

}  // namespace muhasse
