#pragma once

// σ^e-linear maps between free modules: f(c·v) = σ^e(c)·f(v).
// Column j of the matrix is the image of the j-th source basis vector, so
// f(v) = M·σ^e(v) and mat(f∘g) = mat(f)·σ^{twist(f)}(mat(g)).

#include <memory>
#include <vector>

#include "muhasse/linalg.hpp"

namespace muhasse {

template <CoefficientRing Ring>
class SemilinearMap {
 public:
  using Element = typename Ring::Element;

  SemilinearMap(std::shared_ptr<const Ring> ring, Matrix<Element> matrix, long twist)
      : ring_(std::move(ring)), matrix_(std::move(matrix)), twist_(twist) {}

  static SemilinearMap identity(std::shared_ptr<const Ring> ring, std::size_t n) {
    auto m = identity_matrix(*ring, n);
    return SemilinearMap(std::move(ring), std::move(m), 0);
  }

  const Ring& ring() const { return *ring_; }
  const std::shared_ptr<const Ring>& ring_ptr() const { return ring_; }
  const Matrix<Element>& matrix() const { return matrix_; }
  long twist() const { return twist_; }
  std::size_t target_rank() const { return matrix_.rows(); }
  std::size_t source_rank() const { return matrix_.cols(); }
  bool is_square() const { return matrix_.is_square(); }

  std::vector<Element> apply(const std::vector<Element>& v) const {
    return multiply(*ring_, matrix_, frobenius(*ring_, v, twist_));
  }

  friend bool operator==(const SemilinearMap& f, const SemilinearMap& g) {
    return f.ring_ == g.ring_ && f.twist_ == g.twist_ && f.matrix_ == g.matrix_;
  }

 private:
  std::shared_ptr<const Ring> ring_;
  Matrix<Element> matrix_;
  long twist_;
};

template <CoefficientRing Ring>
SemilinearMap<Ring> compose(const SemilinearMap<Ring>& f, const SemilinearMap<Ring>& g) {
  if (f.ring_ptr() != g.ring_ptr()) throw PreconditionError("compose: maps live over different rings");
  if (f.source_rank() != g.target_rank()) throw PreconditionError("compose: source of f differs from target of g");
  const auto& ring = f.ring();
  auto m = multiply(ring, f.matrix(), frobenius(ring, g.matrix(), f.twist()));
  return SemilinearMap<Ring>(f.ring_ptr(), std::move(m), f.twist() + g.twist());
}

template <CoefficientRing Ring>
SemilinearMap<Ring> iterate(const SemilinearMap<Ring>& f, unsigned j) {
  if (!f.is_square()) throw PreconditionError("iterate: map is not an endomorphism");
  auto out = SemilinearMap<Ring>::identity(f.ring_ptr(), f.source_rank());
  for (unsigned i = 0; i < j; ++i) out = compose(f, out);
  return out;
}

/// Rank of the matrix mod ℓ. σ is bijective, so the twist does not matter.
template <CoefficientRing Ring>
std::size_t rank_mod_ell(const SemilinearMap<Ring>& f) {
  const auto& ring = f.ring();
  return rank(ring.residue_field(), reduce(ring, f.matrix()));
}

/// Residue-field basis of the kernel of f mod ℓ, as a semilinear map:
/// {v : M̄·σ^e(v) = 0} = σ^{-e}(ker M̄).
template <CoefficientRing Ring>
std::vector<std::vector<Residue>> kernel_mod_ell(const SemilinearMap<Ring>& f) {
  const auto& ring = f.ring();
  const auto& field = ring.residue_field();
  auto basis = nullspace(field, reduce(ring, f.matrix()));
  for (auto& v : basis) v = frobenius(field, std::move(v), -f.twist());
  return basis;
}

/// ranks of iterate(f, j) mod ℓ for j = 0..bound
template <CoefficientRing Ring>
std::vector<std::size_t> rank_profile(const SemilinearMap<Ring>& f, unsigned bound) {
  if (!f.is_square()) throw PreconditionError("rank_profile: map is not an endomorphism");
  std::vector<std::size_t> ranks;
  ranks.reserve(bound + 1);
  auto power = SemilinearMap<Ring>::identity(f.ring_ptr(), f.source_rank());
  ranks.push_back(rank_mod_ell(power));
  for (unsigned j = 1; j <= bound; ++j) {
    power = compose(f, power);
    ranks.push_back(rank_mod_ell(power));
  }
  return ranks;
}

/// Limit of rank(f^j) mod ℓ; exact once bound ≥ source rank.
template <CoefficientRing Ring>
std::size_t stable_rank(const SemilinearMap<Ring>& f, unsigned bound) {
  if (bound == 0) throw PreconditionError("stable_rank: bound must be at least 1");
  return rank_profile(f, bound).back();
}

}  // namespace muhasse
