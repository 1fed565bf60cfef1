#pragma once

// Graded polarized Dieudonné modules M = M_0 ⊕ M_1 with an inert unitary
// structure of signature (a, b) and multiplicity r, over W_N(F_{ℓ^{2k}}).
//
// F is σ-linear and swaps the grading: F|M_0 : M_0 → M_1 has matrix `f_even`
// (called A elsewhere) and F|M_1 : M_1 → M_0 has matrix `f_odd` (B). V = ℓF^{-1}
// is σ^{-1}-linear with blocks `v_even` : M_0 → M_1 and `v_odd` : M_1 → M_0.
//
// M_1 is identified with the dual of M_0 by the standard alternating pairing
// ⟨x_i, y_j⟩ = δ_ij = −⟨y_j, x_i⟩. With that pairing the identity
// ⟨Fx, y⟩ = σ⟨x, Vy⟩ reads σ(v_even) = −f_evenᵀ and σ(v_odd) = −f_oddᵀ, so
// polarization forces f_odd = −ℓ·f_even^{-ᵀ} (no Frobenius twist appears).

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "muhasse/arith.hpp"
#include "muhasse/matrix.hpp"
#include "muhasse/semilinear.hpp"

namespace muhasse {

struct PelParams {
  std::uint32_t ell = 2;
  unsigned a = 1;
  unsigned b = 2;
  unsigned r = 1;
  unsigned k = 1;
  unsigned N = 1;
  /// Accept a = b (split reflex prime) and a = 0.
  bool allow_degenerate = false;

  unsigned n() const { return (a + b) * r; }
  unsigned height() const { return 2 * n(); }
  unsigned residue_degree() const { return 2 * k; }
  unsigned default_precision() const { return 2 * (2 * k) * (a + b) * r + 1; }

  /// Throws InvalidParameters.
  void validate() const;
  PelParams with_precision(unsigned precision) const {
    PelParams p = *this;
    p.N = precision;
    return p;
  }
  friend bool operator==(const PelParams&, const PelParams&) = default;
};

/// Validated parameters; N defaults to 2·(2k)·(a+b)·r + 1.
PelParams make_params(std::uint32_t ell, unsigned a, unsigned b, unsigned r = 1, unsigned k = 1,
                      std::optional<unsigned> N = std::nullopt, bool allow_degenerate = false);

std::shared_ptr<const WittRing> ring_for(const PelParams& params);

struct Finding {
  std::string code;  // shape | ring | fv | vf | signature | exactness | polarization
  std::string message;
  bool fatal = true;
  friend bool operator==(const Finding&, const Finding&) = default;
};

bool has_fatal(const std::vector<Finding>& findings);
std::string describe(const std::vector<Finding>& findings);

/// The mod-ℓ (BT₁) truncation (M̄, F̄, V̄).
class Bt1Module {
 public:
  Bt1Module(PelParams params, std::shared_ptr<const FiniteField> field, Matrix<Residue> f_even,
            Matrix<Residue> f_odd, Matrix<Residue> v_even, Matrix<Residue> v_odd,
            bool polarization_relaxed = false);

  const PelParams& params() const { return params_; }
  const FiniteField& field() const { return *field_; }
  const std::shared_ptr<const FiniteField>& field_ptr() const { return field_; }
  const Matrix<Residue>& f_even() const { return f_even_; }
  const Matrix<Residue>& f_odd() const { return f_odd_; }
  const Matrix<Residue>& v_even() const { return v_even_; }
  const Matrix<Residue>& v_odd() const { return v_odd_; }
  bool polarization_relaxed() const { return polarization_relaxed_; }

 private:
  PelParams params_;
  std::shared_ptr<const FiniteField> field_;
  Matrix<Residue> f_even_, f_odd_, v_even_, v_odd_;
  bool polarization_relaxed_;
};

class DieudonneModule {
 public:
  DieudonneModule(PelParams params, std::shared_ptr<const WittRing> ring, Matrix<RingElement> f_even,
                  Matrix<RingElement> f_odd, Matrix<RingElement> v_even, Matrix<RingElement> v_odd,
                  bool polarization_relaxed = false);

  const PelParams& params() const { return params_; }
  const WittRing& ring() const { return *ring_; }
  const std::shared_ptr<const WittRing>& ring_ptr() const { return ring_; }
  const Matrix<RingElement>& f_even() const { return f_even_; }
  const Matrix<RingElement>& f_odd() const { return f_odd_; }
  const Matrix<RingElement>& v_even() const { return v_even_; }
  const Matrix<RingElement>& v_odd() const { return v_odd_; }
  bool polarization_relaxed() const { return polarization_relaxed_; }

  /// F on M = M_0 ⊕ M_1 as a twist-1 map of rank 2n.
  SemilinearMap<WittRing> frobenius() const;
  /// V on M as a twist-(−1) map of rank 2n.
  SemilinearMap<WittRing> verschiebung() const;

  Bt1Module reduce() const;

  friend bool operator==(const DieudonneModule& x, const DieudonneModule& y) {
    return x.params_ == y.params_ && x.f_even_ == y.f_even_ && x.f_odd_ == y.f_odd_ && x.v_even_ == y.v_even_ &&
           x.v_odd_ == y.v_odd_;
  }

 private:
  PelParams params_;
  std::shared_ptr<const WittRing> ring_;
  Matrix<RingElement> f_even_, f_odd_, v_even_, v_odd_;
  bool polarization_relaxed_;
};

/// Every violated invariant, in a fixed order (empty = valid).
std::vector<Finding> validate(const DieudonneModule& module);
std::vector<Finding> validate(const Bt1Module& module);

/// X with A·X = X·A = ℓ·I for A of Smith type (1^{units}, ℓ^{n−units}); N ≥ 2.
/// The result is determined mod ℓ^{N−1}; the undetermined top digit is fixed by
/// the elimination. Throws PreconditionError on any other Smith type.
Matrix<RingElement> scaled_inverse(const WittRing& ring, const Matrix<RingElement>& a, std::size_t units);

/// The mod-ℓ polarization rule: X̄ = K·L with K a kernel basis of Ā (columns)
/// and L a left-kernel basis (rows), both in reduced echelon form.
Matrix<Residue> bt1_scaled_inverse(const FiniteField& field, const Matrix<Residue>& a);

/// Polarized module with F|M_0 = A; F|M_1 and V follow from the pairing.
DieudonneModule from_F_block(const PelParams& params, Matrix<RingElement> a);
/// Module with both F blocks given explicitly (not necessarily polarized).
DieudonneModule from_F_blocks(const PelParams& params, Matrix<RingElement> a, Matrix<RingElement> b);
Bt1Module bt1_from_F_block(const PelParams& params, std::shared_ptr<const FiniteField> field, Matrix<Residue> a);

/// Unit γ with σ(γ) = −γ; it scales the self-paired slope-1/2 blocks.
RingElement antiinvariant_unit(const WittRing& ring);

/// a·r ordinary pairs and (b−a)·r slope-1/2 blocks, written in a basis adapted
/// to the standard pairing. M_0 basis order: e0 (a·r), g0 ((b−a)·r), f0 (a·r);
/// M_1 basis order: f1, γ·g1, −e1 (dual to the M_0 basis).
DieudonneModule canonical_mu_ordinary(const PelParams& params);

/// A = U1·diag(1^{br}, ℓ^{ar})·U2 with U1, U2 uniform in GL_n(W_N). Digits are
/// drawn per coefficient from a counter-based stream, so raising N keeps the
/// lower digits: random_module(p.with_precision(2N), s) reduces to
/// random_module(p, s).
DieudonneModule random_module(const PelParams& params, std::uint64_t seed);

/// Uniform element of GL_n(W_N) from the same digit streams.
Matrix<RingElement> random_invertible(const WittRing& ring, std::size_t n, std::uint64_t seed, std::uint64_t tag);

struct BasisChange {
  Matrix<RingElement> g0;  // on M_0
  Matrix<RingElement> g1;  // on M_1
};

enum class PairingPolicy { require_compatible, allow_incompatible };

/// Transport to the basis given by the columns of g. When g does not preserve
/// the pairing (g0ᵀ·g1 ≠ I) the result is flagged as polarization-relaxed
/// under `allow_incompatible` and rejected otherwise.
DieudonneModule base_change(const DieudonneModule& module, const BasisChange& g,
                            PairingPolicy policy = PairingPolicy::require_compatible);
bool preserves_pairing(const WittRing& ring, const BasisChange& g);

/// The Hodge filtration Ω = ker F̄ ⊂ M̄ with Verschiebung on it.
struct HodgePoint {
  PelParams params;
  std::shared_ptr<const FiniteField> field;
  std::vector<std::vector<Residue>> omega0;  // basis of Ω ∩ M̄_0 (coordinates in M̄_0)
  std::vector<std::vector<Residue>> omega1;  // basis of Ω ∩ M̄_1 (coordinates in M̄_1)
  std::vector<std::size_t> free0;            // coordinate positions read off for Ω_0
  std::vector<std::size_t> free1;
  /// V̄ on Ω = Ω_0 ⊕ Ω_1 (Ω_0 first), twist −1, block antidiagonal.
  SemilinearMap<FiniteField> ver;

  std::size_t rank0() const { return omega0.size(); }
  std::size_t rank1() const { return omega1.size(); }
};

HodgePoint hodge(const DieudonneModule& module);
HodgePoint hodge(const Bt1Module& module);

}  // namespace muhasse
