#pragma once

// Shared helpers and brute-force oracles for the unit tests.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "muhasse/dieudonne.hpp"
#include "muhasse/linalg.hpp"

namespace muhasse::testing {

/// Schoolbook product in F_ℓ[x]/(f), independent of the field tables.
inline std::vector<std::uint32_t> naive_mul(const std::vector<std::uint32_t>& x, const std::vector<std::uint32_t>& y,
                                            const std::vector<std::uint32_t>& modulus, std::uint32_t ell) {
  const std::size_t m = modulus.size();
  std::vector<std::uint64_t> prod(2 * m, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{x[i]} * y[j]) % ell;
  for (std::size_t d = 2 * m - 1; d-- > m;) {
    const std::uint64_t c = prod[d];
    if (!c) continue;
    prod[d] = 0;
    // x^d = x^{d−m}·(−Σ f_i x^i)
    for (std::size_t i = 0; i < m; ++i) prod[d - m + i] = (prod[d - m + i] + (ell - c) * modulus[i]) % ell;
  }
  if (m > 0 && prod[m] != 0) {
    const std::uint64_t c = prod[m];
    prod[m] = 0;
    for (std::size_t i = 0; i < m; ++i) prod[i] = (prod[i] + (ell - c) * modulus[i]) % ell;
  }
  return {prod.begin(), prod.begin() + m};
}

/// det(M) by the Leibniz expansion over all permutations.
template <CoefficientRing Ring>
typename Ring::Element leibniz_determinant(const Ring& ring, const Matrix<typename Ring::Element>& m) {
  const std::size_t n = m.rows();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  auto total = ring.zero();
  do {
    auto term = ring.one();
    for (std::size_t i = 0; i < n; ++i) term = ring.mul(term, m(i, perm[i]));
    std::size_t inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    total = inversions % 2 ? ring.sub(total, term) : ring.add(total, term);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/// det(T·I − M) by Leibniz over polynomials (low degree first).
template <CoefficientRing Ring>
std::vector<typename Ring::Element> leibniz_charpoly(const Ring& ring, const Matrix<typename Ring::Element>& m) {
  using E = typename Ring::Element;
  const std::size_t n = m.rows();
  auto poly_mul = [&](const std::vector<E>& x, const std::vector<E>& y) { return polynomial_product(ring, x, y); };
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::vector<E> total(n + 1, ring.zero());
  do {
    std::vector<E> term = {ring.one()};
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<E> entry = {ring.neg(m(i, perm[i]))};
      if (perm[i] == i) entry.push_back(ring.one());
      term = poly_mul(term, entry);
    }
    std::size_t inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    for (std::size_t d = 0; d < term.size(); ++d)
      total[d] = inversions % 2 ? ring.sub(total[d], term[d]) : ring.add(total[d], term[d]);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

inline Residue random_residue(const FiniteField& field, std::mt19937_64& rng) {
  return Residue{static_cast<std::uint32_t>(rng() % field.size())};
}

inline Matrix<Residue> random_residue_matrix(const FiniteField& field, std::size_t r, std::size_t c,
                                             std::mt19937_64& rng) {
  Matrix<Residue> m(r, c, field.zero());
  for (auto& x : m.data()) x = random_residue(field, rng);
  return m;
}

inline RingElement random_ring_element(const WittRing& ring, std::mt19937_64& rng) {
  std::vector<mpz_class> c(ring.degree());
  gmp_randclass gen(gmp_randinit_default);
  gen.seed(static_cast<unsigned long>(rng()));
  for (auto& x : c) x = gen.get_z_range(ring.modulus_power());
  return ring.from_coefficients(c);
}

inline Matrix<RingElement> random_ring_matrix(const WittRing& ring, std::size_t r, std::size_t c,
                                              std::mt19937_64& rng) {
  Matrix<RingElement> m(r, c, ring.zero());
  for (auto& x : m.data()) x = random_ring_element(ring, rng);
  return m;
}

/// Pairing-compatible change of basis: g1 = g0^{-T}.
inline BasisChange compatible_change(const DieudonneModule& module, std::uint64_t seed) {
  const auto& ring = module.ring();
  auto g0 = random_invertible(ring, module.params().n(), seed, 77);
  auto g1 = inverse(ring, g0).transpose();
  return {std::move(g0), std::move(g1)};
}

inline BasisChange arbitrary_change(const DieudonneModule& module, std::uint64_t seed) {
  const auto& ring = module.ring();
  return {random_invertible(ring, module.params().n(), seed, 78), random_invertible(ring, module.params().n(), seed, 79)};
}

/// The census grid of parameter points.
struct GridPoint {
  std::uint32_t ell;
  unsigned a, b;
};
inline const std::vector<GridPoint>& census_grid() {
  static const std::vector<GridPoint> grid = {{2, 1, 2}, {3, 1, 2}, {5, 1, 2}, {2, 1, 3}, {3, 2, 3}};
  return grid;
}

}  // namespace muhasse::testing
