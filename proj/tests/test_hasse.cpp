#include <gtest/gtest.h>

#include "muhasse/hasse.hpp"
#include "muhasse/linalg.hpp"
#include "muhasse/newton.hpp"
#include "support.hpp"

using namespace muhasse;
using namespace muhasse::testing;

namespace {

// Coordinates of ḡ0·ω'_j in the old Ω_0 basis, read at the old free columns.
Matrix<Residue> hodge_transition(const HodgePoint& old_h, const HodgePoint& new_h, const Matrix<Residue>& g0bar) {
  const auto& f = *old_h.field;
  const std::size_t d = old_h.rank0();
  Matrix<Residue> h(d, d, f.zero());
  for (std::size_t j = 0; j < d; ++j) {
    const auto v = multiply(f, g0bar, new_h.omega0[j]);
    for (std::size_t i = 0; i < d; ++i) h(i, j) = v[old_h.free0[i]];
  }
  return h;
}

}  // namespace

TEST(Hasse, CanonicalVerAndValue) {
  const auto p = make_params(3, 1, 2);
  const auto h = hodge(canonical_mu_ordinary(p));
  const auto& f = *h.field;
  Matrix<Residue> expected(3, 3, f.zero());
  expected(0, 1) = f.one();
  expected(1, 0) = f.one();
  EXPECT_EQ(ver_on_hodge(h).matrix(), expected);
  EXPECT_EQ(ver_on_hodge(h).twist(), -1);
  EXPECT_EQ(ver_squared_on_a(h).matrix(), Matrix<Residue>(1, 1, f.one()));
  EXPECT_EQ(ver_squared_on_a(h).twist(), -2);
  const auto v = mu_hasse(h);
  EXPECT_EQ(v.value, f.one());
  EXPECT_TRUE(v.nonvanishing);
  EXPECT_EQ(v.basis_tag, basis_tag(h));
}

TEST(Hasse, SquareIsTheCornerOfTheIterate) {
  for (const auto& g : census_grid()) {
    const auto p = make_params(g.ell, g.a, g.b, 1, 2);
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto h = hodge(random_module(p, s));
      const auto it = iterate(ver_on_hodge(h), 2);
      EXPECT_EQ(ver_squared_on_a(h).matrix(), it.matrix().block(0, 0, h.rank0(), h.rank0()));
      EXPECT_EQ(mu_hasse(h).value, leibniz_determinant(*h.field, ver_squared_on_a(h).matrix()));
    }
  }
}

TEST(Hasse, BlockStructure) {
  for (const auto& g : census_grid()) {
    const auto p = make_params(g.ell, g.a, g.b);
    for (std::uint64_t s = 0; s < 50; ++s) {
      const auto h = hodge(random_module(p, s));
      const auto& f = *h.field;
      const auto b01 = ver_block_01(h), b10 = ver_block_10(h);
      EXPECT_EQ(b01.matrix().rows(), h.rank1());
      EXPECT_EQ(b01.matrix().cols(), h.rank0());
      EXPECT_LE(rank(f, b01.matrix()), p.a * p.r);
      EXPECT_LE(rank(f, b10.matrix()), p.a * p.r);
      Matrix<Residue> assembled(h.rank0() + h.rank1(), h.rank0() + h.rank1(), f.zero());
      assembled.set_block(h.rank0(), 0, b01.matrix());
      assembled.set_block(0, h.rank0(), b10.matrix());
      EXPECT_EQ(assembled, ver_on_hodge(h).matrix());
    }
  }
}

TEST(EllRank, CanonicalAndDegenerate) {
  for (auto [a, b, r] : {std::tuple{1u, 2u, 1u}, {2u, 3u, 1u}, {1u, 3u, 1u}, {1u, 2u, 2u}})
    for (std::uint32_t ell : {2u, 3u, 5u}) {
      const auto p = make_params(ell, a, b, r);
      const auto h = hodge(canonical_mu_ordinary(p));
      EXPECT_EQ(ell_rank(h), 2 * a * r);
      EXPECT_TRUE(is_mu_ordinary(h));
    }
  const auto p0 = make_params(3, 0, 2, 1, 1, std::nullopt, true);
  const auto h0 = hodge(canonical_mu_ordinary(p0));
  EXPECT_EQ(ell_rank(h0), 0u);
  EXPECT_TRUE(mu_hasse(h0).nonvanishing);
}

TEST(EllRank, EqualsSlopeZeroMultiplicity) {
  const auto p = make_params(2, 1, 2);
  std::size_t ordinary = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const auto m = random_module(p, s);
    const auto h = hodge(m);
    const auto np = newton_polygon(m);
    ASSERT_EQ(ell_rank(h), slope_zero_multiplicity(np)) << s;
    ASSERT_EQ(mu_hasse(h).nonvanishing, ell_rank(h) == 2 * p.a * p.r) << s;
    ordinary += mu_hasse(h).nonvanishing;
  }
  EXPECT_GT(ordinary, 0u);
  EXPECT_LT(ordinary, 1000u);
}

TEST(Hasse, TransformationLawUnderBaseChange) {
  for (unsigned k : {1u, 2u}) {
    for (const auto& g : census_grid()) {
      const auto p = make_params(g.ell, g.a, g.b, 1, k);
      for (std::uint64_t s = 0; s < 10; ++s) {
        const auto m = random_module(p, s);
        const auto c = compatible_change(m, s + 1000);
        const auto h = hodge(m), h2 = hodge(base_change(m, c));
        const auto& f = *h.field;
        const auto t = hodge_transition(h, h2, reduce(m.ring(), c.g0));
        const Residue dt = determinant(f, t);
        ASSERT_FALSE(f.is_zero(dt));
        // det' = det·σ^{-2}(det h)/det h
        const Residue predicted = f.mul(mu_hasse(h).value, f.mul(f.frobenius(dt, -2), f.inverse(dt)));
        EXPECT_EQ(mu_hasse(h2).value, predicted);
        EXPECT_EQ(mu_hasse(h2).nonvanishing, mu_hasse(h).nonvanishing);
        if (k == 1) EXPECT_EQ(mu_hasse(h2).value, mu_hasse(h).value);
      }
    }
  }
}

TEST(Hasse, NonvanishingSurvivesIncompatibleChanges) {
  const auto p = make_params(3, 1, 2);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto m = random_module(p, s);
    const auto m2 = base_change(m, arbitrary_change(m, s), PairingPolicy::allow_incompatible);
    EXPECT_EQ(mu_hasse(hodge(m2)).nonvanishing, mu_hasse(hodge(m)).nonvanishing);
    EXPECT_EQ(ell_rank(hodge(m2)), ell_rank(hodge(m)));
  }
}

TEST(RankProfile, StabilizesByTheWindowStart) {
  for (const auto& g : census_grid()) {
    const auto p = make_params(g.ell, g.a, g.b);
    for (std::uint64_t s = 0; s < 50; ++s) {
      const auto prof = ver_rank_profile(hodge(random_module(p, s)));
      ASSERT_EQ(prof.size(), 2 * p.n() + 1);
      EXPECT_EQ(prof[0], p.n());
      EXPECT_LE(stabilization_index(prof), p.n());
      for (std::size_t j = 1; j < prof.size(); ++j) EXPECT_LE(prof[j], 2 * p.a * p.r);
    }
  }
}

TEST(RankProfile, StabilizationIndex) {
  EXPECT_EQ(stabilization_index({5, 3, 2, 2, 2}), 2u);
  EXPECT_EQ(stabilization_index({3, 3, 3}), 0u);
  EXPECT_EQ(stabilization_index({4, 2, 0, 0}), 2u);
  EXPECT_EQ(stabilization_index({4, 2, 1}), 2u);
  EXPECT_EQ(stabilization_index({}), 0u);
}

TEST(RankProfile, MultiplicityStretchesTheWindow) {
  // with r = 2 the profile can still move after j = a + b
  const auto p = make_params(2, 1, 2, 2);
  std::size_t late = 0;
  for (std::uint64_t s = 0; s < 300; ++s) {
    const auto prof = ver_rank_profile(hodge(random_module(p, s)));
    const auto idx = stabilization_index(prof);
    EXPECT_LE(idx, p.n());
    late += idx > p.a + p.b;
  }
  EXPECT_GT(late, 0u);
}
