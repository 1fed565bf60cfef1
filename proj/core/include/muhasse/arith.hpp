#pragma once

// Exact arithmetic in the residue field F_{ℓ^m} and in the truncated Witt
// ring W_N(F_{ℓ^m}) = (Z/ℓ^N)[x]/(f), f a monic lift of an irreducible
// polynomial over F_ℓ.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace muhasse {

/// Element of F_{ℓ^m}, encoded as Σ c_i ℓ^i over its polynomial-basis digits.
struct Residue {
  std::uint32_t index = 0;
  friend bool operator==(Residue, Residue) = default;
  friend auto operator<=>(Residue, Residue) = default;
};

bool is_prime(std::uint64_t n);

/// First monic irreducible polynomial of degree m over F_ℓ, ordered
/// lexicographically from the leading non-monic coefficient down.
/// Returns the m low coefficients (the leading 1 is implicit).
std::vector<std::uint32_t> first_irreducible(std::uint32_t ell, unsigned m);

/// F_{ℓ^m} with table-driven multiplication (discrete log / exp).
class FiniteField {
 public:
  using Element = Residue;

  static std::shared_ptr<const FiniteField> create(std::uint32_t ell, unsigned m,
                                                   std::vector<std::uint32_t> modulus);

  std::uint32_t characteristic() const { return ell_; }
  unsigned degree() const { return m_; }
  std::uint32_t size() const { return q_; }
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  Residue zero() const { return {0}; }
  Residue one() const { return {1}; }
  /// Class of x in F_ℓ[x]/(f). For m = 1 the modulus is x and this is 0.
  Residue generator() const;
  Residue from_integer(std::int64_t v) const;

  bool is_zero(Residue x) const { return x.index == 0; }
  Residue add(Residue x, Residue y) const;
  Residue sub(Residue x, Residue y) const { return add(x, neg(y)); }
  Residue neg(Residue x) const { return {neg_[x.index]}; }
  Residue mul(Residue x, Residue y) const {
    if (x.index == 0 || y.index == 0) return {0};
    std::uint32_t s = log_[x.index] + log_[y.index];
    return {exp_[s]};
  }
  void add_product(Residue& acc, Residue x, Residue y) const { acc = add(acc, mul(x, y)); }
  Residue inverse(Residue x) const;
  Residue pow(Residue x, std::uint64_t e) const;

  /// σ^e(x) = x^{ℓ^e}, e taken mod m.
  Residue frobenius(Residue x, long e) const;
  unsigned frobenius_order() const { return m_; }

  std::vector<std::uint32_t> digits(Residue x) const;
  Residue from_digits(std::span<const std::uint32_t> digits) const;

  const FiniteField& residue_field() const { return *this; }
  Residue reduce(Residue x) const { return x; }

  std::string to_string(Residue x) const;

 private:
  FiniteField() = default;
  Residue slow_mul(Residue x, Residue y) const;

  std::uint32_t ell_ = 0;
  unsigned m_ = 0;
  std::uint32_t q_ = 0;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> exp_;  // length 2(q-1) so log sums need no reduction
  std::vector<std::uint32_t> neg_;
  std::vector<std::uint16_t> add_table_;  // q*q when q is small, else empty
  std::vector<std::uint64_t> frob_exponent_;  // ℓ^e mod (q-1)
};

/// Element of W_N(F_{ℓ^m}): m coefficients in [0, ℓ^N) in the basis 1, x̄, ..., x̄^{m-1}.
struct RingElement {
  std::vector<mpz_class> coeffs;
  friend bool operator==(const RingElement&, const RingElement&) = default;
};

/// Truncated Witt ring W_N(F_{ℓ^m}). Immutable after construction.
class WittRing {
 public:
  using Element = RingElement;

  static std::shared_ptr<const WittRing> make(std::uint32_t ell, unsigned m, unsigned N);

  std::uint32_t characteristic() const { return ell_; }
  unsigned degree() const { return m_; }
  unsigned precision() const { return N_; }
  const mpz_class& modulus_power() const { return pN_; }
  /// Low coefficients of the monic modulus f.
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }
  const RingElement& sigma_of_generator() const { return sigma_gen_; }

  RingElement zero() const;
  RingElement one() const;
  RingElement generator() const;
  RingElement from_integer(const mpz_class& v) const;
  RingElement from_coefficients(std::span<const mpz_class> coeffs) const;

  bool is_zero(const RingElement& x) const;
  bool is_unit(const RingElement& x) const;
  RingElement add(const RingElement& x, const RingElement& y) const;
  RingElement sub(const RingElement& x, const RingElement& y) const;
  RingElement neg(const RingElement& x) const;
  RingElement mul(const RingElement& x, const RingElement& y) const;
  void add_product(RingElement& acc, const RingElement& x, const RingElement& y) const;
  RingElement scale(const RingElement& x, const mpz_class& c) const;
  RingElement pow(const RingElement& x, const mpz_class& e) const;
  /// Inverse of a unit; throws PreconditionError when x is not a unit.
  RingElement inverse(const RingElement& x) const;
  /// x / ℓ for x ≡ 0 mod ℓ. The top ℓ-adic digit of the result is unknown and set to 0.
  RingElement divide_by_ell(const RingElement& x) const;

  /// σ^e(x); σ is the Frobenius lift, of order m.
  RingElement frobenius(const RingElement& x, long e) const;
  unsigned frobenius_order() const { return m_; }

  /// Largest v < N with x ∈ ℓ^v W; std::nullopt stands for "≥ N" (x = 0).
  std::optional<unsigned> valuation(const RingElement& x) const;

  const FiniteField& residue_field() const { return *field_; }
  std::shared_ptr<const FiniteField> residue_field_ptr() const { return field_; }
  Residue reduce(const RingElement& x) const;
  /// Lift with coefficients in [0, ℓ).
  RingElement lift(Residue x) const;
  RingElement teichmuller(Residue x) const;

  std::string to_string(const RingElement& x) const;

 private:
  WittRing() = default;
  void reduce_poly(std::vector<mpz_class>& poly) const;
  RingElement evaluate_modulus(const RingElement& y, bool derivative) const;

  std::uint32_t ell_ = 0;
  unsigned m_ = 0;
  unsigned N_ = 0;
  mpz_class pN_;
  std::vector<std::uint32_t> modulus_;
  RingElement sigma_gen_;
  // sigma_[e] holds the m×m matrix of σ^e on coefficient vectors, column-major by source index.
  std::vector<std::vector<mpz_class>> sigma_;
  std::shared_ptr<const FiniteField> field_;
};

std::shared_ptr<const WittRing> make_ring(std::uint32_t ell, unsigned m, unsigned N);

inline RingElement frobenius(const WittRing& ring, const RingElement& x, long e) {
  return ring.frobenius(x, e);
}
inline std::optional<unsigned> valuation(const WittRing& ring, const RingElement& x) {
  return ring.valuation(x);
}

}  // namespace muhasse
