#include "muhasse/hasse.hpp"

#include "muhasse/linalg.hpp"

namespace muhasse {

SemilinearMap<FiniteField> ver_on_hodge(const HodgePoint& h) { return h.ver; }

SemilinearMap<FiniteField> ver_block_01(const HodgePoint& h) {
  const std::size_t d0 = h.rank0(), d1 = h.rank1();
  return SemilinearMap<FiniteField>(h.field, h.ver.matrix().block(d0, 0, d1, d0), h.ver.twist());
}

SemilinearMap<FiniteField> ver_block_10(const HodgePoint& h) {
  const std::size_t d0 = h.rank0(), d1 = h.rank1();
  return SemilinearMap<FiniteField>(h.field, h.ver.matrix().block(0, d0, d0, d1), h.ver.twist());
}

SemilinearMap<FiniteField> ver_squared_on_a(const HodgePoint& h) { return compose(ver_block_10(h), ver_block_01(h)); }

std::uint64_t basis_tag(const HodgePoint& h) {
  std::uint64_t tag = 0xCBF29CE484222325ULL;
  auto feed = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      tag ^= (v >> (8 * i)) & 0xFF;
      tag *= 0x100000001B3ULL;
    }
  };
  feed(h.omega0.size());
  for (const auto& v : h.omega0)
    for (const auto& x : v) feed(x.index);
  return tag;
}

HasseValue mu_hasse(const HodgePoint& h) {
  const auto& field = *h.field;
  const auto sq = ver_squared_on_a(h);
  const Residue det = determinant(field, sq.matrix());
  return {det, basis_tag(h), !field.is_zero(det)};
}

std::vector<std::size_t> ver_rank_profile(const HodgePoint& h) {
  const auto& p = h.params;
  return rank_profile(h.ver, 2 * (p.a + p.b) * p.r);
}

std::size_t ell_rank(const HodgePoint& h) {
  const auto& p = h.params;
  return stable_rank(h.ver, 2 * (p.a + p.b) * p.r);
}

bool is_mu_ordinary(const HodgePoint& h) { return mu_hasse(h).nonvanishing; }

std::size_t stabilization_index(const std::vector<std::size_t>& profile) {
  std::size_t j = profile.size();
  while (j > 1 && profile[j - 2] == profile.back()) --j;
  return j == 0 ? 0 : j - 1;
}

}  // namespace muhasse
