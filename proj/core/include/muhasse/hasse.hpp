#pragma once

#include <cstdint>
#include <vector>

#include "muhasse/dieudonne.hpp"

namespace muhasse {

struct HasseValue {
  Residue value;                // det of ver² on Ω_0 in the stored basis
  std::uint64_t basis_tag = 0;  // hash of the Ω_0 basis
  bool nonvanishing = false;
};

/// V̄ on Ω_0 ⊕ Ω_1, twist −1.
SemilinearMap<FiniteField> ver_on_hodge(const HodgePoint& h);
/// The Ω_0 → Ω_1 block of ver.
SemilinearMap<FiniteField> ver_block_01(const HodgePoint& h);
/// The Ω_1 → Ω_0 block of ver.
SemilinearMap<FiniteField> ver_block_10(const HodgePoint& h);
/// ver∘ver restricted to Ω_0, twist −2.
SemilinearMap<FiniteField> ver_squared_on_a(const HodgePoint& h);

std::uint64_t basis_tag(const HodgePoint& h);
HasseValue mu_hasse(const HodgePoint& h);

/// rank(ver^j) for j = 0..2(a+b)r.
std::vector<std::size_t> ver_rank_profile(const HodgePoint& h);
std::size_t ell_rank(const HodgePoint& h);
bool is_mu_ordinary(const HodgePoint& h);

/// First j from which the rank profile stays constant.
std::size_t stabilization_index(const std::vector<std::size_t>& profile);

}  // namespace muhasse
