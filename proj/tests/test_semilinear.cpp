#include <gtest/gtest.h>

#include <random>

#include "muhasse/errors.hpp"
#include "muhasse/semilinear.hpp"
#include "support.hpp"

using namespace muhasse;
using namespace muhasse::testing;

namespace {

std::shared_ptr<const FiniteField> f4() { return FiniteField::create(2, 2, first_irreducible(2, 2)); }

std::vector<Residue> vec_of(const FiniteField& f, std::uint64_t idx, std::size_t n) {
  std::vector<Residue> v(n);
  for (auto& x : v) {
    x = Residue{static_cast<std::uint32_t>(idx % f.size())};
    idx /= f.size();
  }
  return v;
}

}  // namespace

TEST(Semilinear, HandComputedCompositionOverF4) {
  // F_4 = {0, 1, w, w+1} with w² = w + 1; indices 0, 1, 2, 3.
  auto f = f4();
  const Residue zero{0}, one{1}, w{2}, w1{3};
  ASSERT_EQ(f->mul(w, w), w1);
  ASSERT_EQ(f->frobenius(w, 1), w1);

  Matrix<Residue> mf(2, 2, zero), mg(2, 2, zero);
  mf(0, 0) = w;
  mf(0, 1) = one;
  mf(1, 1) = w1;
  mg(0, 0) = one;
  mg(1, 0) = w;
  mg(1, 1) = one;
  const SemilinearMap<FiniteField> fmap(f, mf, 1), gmap(f, mg, 1);
  // mat(f∘g) = Mf·σ(Mg); σ(Mg) = [[1,0],[w+1,1]]
  // row 0: [w·1 + 1·(w+1), 1·1] = [1, 1]; row 1: [(w+1)(w+1), w+1] = [w, w+1]
  const auto h = compose(fmap, gmap);
  Matrix<Residue> expected(2, 2, zero);
  expected(0, 0) = one;
  expected(0, 1) = one;
  expected(1, 0) = w;
  expected(1, 1) = w1;
  EXPECT_EQ(h.matrix(), expected);
  EXPECT_EQ(h.twist(), 2);
  // twist 2 ≡ 0 on F_4, so h is linear
  for (std::uint64_t i = 0; i < 16; ++i) {
    const auto v = vec_of(*f, i, 2);
    EXPECT_EQ(h.apply(v), fmap.apply(gmap.apply(v)));
    EXPECT_EQ(h.apply(v), multiply(*f, expected, v));
  }
}

TEST(Semilinear, ApplyIsSemilinear) {
  auto f = FiniteField::create(3, 2, first_irreducible(3, 2));
  std::mt19937_64 rng(9);
  for (long twist : {-2L, -1L, 0L, 1L, 3L}) {
    const SemilinearMap<FiniteField> m(f, random_residue_matrix(*f, 3, 3, rng), twist);
    for (int t = 0; t < 20; ++t) {
      const auto c = random_residue(*f, rng);
      auto v = random_residue_matrix(*f, 3, 1, rng).column(0);
      auto cv = v;
      for (auto& x : cv) x = f->mul(c, x);
      auto lhs = m.apply(cv);
      auto rhs = m.apply(v);
      for (auto& x : rhs) x = f->mul(f->frobenius(c, twist), x);
      EXPECT_EQ(lhs, rhs);
    }
  }
}

TEST(Semilinear, CompositionAgreesWithSequentialApplication) {
  auto w = make_ring(3, 2, 4);
  std::mt19937_64 rng(10);
  for (int t = 0; t < 10; ++t) {
    const SemilinearMap<WittRing> a(w, random_ring_matrix(*w, 3, 2, rng), 1);
    const SemilinearMap<WittRing> b(w, random_ring_matrix(*w, 2, 3, rng), -1);
    const auto ab = compose(a, b);
    EXPECT_EQ(ab.twist(), 0);
    for (int s = 0; s < 5; ++s) {
      const auto v = random_ring_matrix(*w, 3, 1, rng).column(0);
      EXPECT_EQ(ab.apply(v), a.apply(b.apply(v)));
    }
  }
  const SemilinearMap<WittRing> a(w, identity_matrix(*w, 2), 0);
  const SemilinearMap<WittRing> b(w, identity_matrix(*w, 3), 0);
  EXPECT_THROW(compose(a, b), PreconditionError);
}

TEST(Semilinear, IterateAndIdentity) {
  auto f = f4();
  std::mt19937_64 rng(12);
  const SemilinearMap<FiniteField> m(f, random_residue_matrix(*f, 3, 3, rng), -1);
  EXPECT_EQ(iterate(m, 0), SemilinearMap<FiniteField>::identity(f, 3));
  EXPECT_EQ(iterate(m, 1), m);
  EXPECT_EQ(iterate(m, 3), compose(m, compose(m, m)));
}

TEST(Semilinear, KernelModEllIsTheKernelOfTheMap) {
  // apply-and-check: every returned vector is killed by the semilinear map
  auto w = make_ring(2, 4, 3);
  const auto& f = w->residue_field();
  std::mt19937_64 rng(13);
  for (long twist : {-1L, 1L, 2L}) {
    for (int t = 0; t < 20; ++t) {
      auto mat = random_ring_matrix(*w, 4, 4, rng);
      for (std::size_t i = 0; i < 4; ++i) mat(i, 3) = w->add(mat(i, 0), mat(i, 1));  // rank ≤ 3
      const SemilinearMap<WittRing> m(w, mat, twist);
      const auto ker = kernel_mod_ell(m);
      EXPECT_EQ(ker.size() + rank_mod_ell(m), 4u);
      const auto mbar = reduce(*w, mat);
      for (const auto& v : ker) {
        const auto image = multiply(f, mbar, frobenius(f, v, twist));
        for (const auto& x : image) EXPECT_TRUE(f.is_zero(x));
      }
    }
  }
}

TEST(Semilinear, RankProfileIsNonIncreasingAndStabilizes) {
  auto f = FiniteField::create(3, 2, first_irreducible(3, 2));
  std::mt19937_64 rng(14);
  for (int t = 0; t < 50; ++t) {
    auto mat = random_residue_matrix(*f, 5, 5, rng);
    for (std::size_t j = 0; j < 5; ++j)
      if (rng() % 2) mat(rng() % 5, j) = f->zero();
    if (t % 2) mat.set_column(4, std::vector<Residue>(5, f->zero()));
    const SemilinearMap<FiniteField> m(f, mat, -1);
    const auto prof = rank_profile(m, 10);
    ASSERT_EQ(prof.size(), 11u);
    EXPECT_EQ(prof[0], 5u);
    for (std::size_t j = 1; j < prof.size(); ++j) EXPECT_LE(prof[j], prof[j - 1]);
    for (std::size_t j = 5; j < prof.size(); ++j) EXPECT_EQ(prof[j], prof[5]);
    EXPECT_EQ(stable_rank(m, 10), prof.back());
  }
}
