#include <gtest/gtest.h>

#include <functional>
#include <set>

#include "muhasse/census.hpp"
#include "muhasse/errors.hpp"
#include "muhasse/hasse.hpp"
#include "muhasse/linalg.hpp"
#include "support.hpp"

using namespace muhasse;
using namespace muhasse::testing;

namespace {

// Symmetric convex chains through integer vertices from (0,0) to (h, h/2).
std::set<std::string> lattice_symmetric_polygons(std::size_t h) {
  std::set<std::string> out;
  if (h % 2) return out;
  const long long H = static_cast<long long>(h), E = H / 2;
  std::vector<SlopeSegment> segs;
  std::function<void(long long, long long, Slope)> walk = [&](long long x, long long y, Slope prev) {
    if (x == H) {
      if (y != E) return;
      NewtonPolygon p(segs);
      if (is_symmetric(p)) out.insert(to_text(p));
      return;
    }
    for (long long x2 = x + 1; x2 <= H; ++x2)
      for (long long y2 = y; y2 <= y + (x2 - x) && y2 <= E; ++y2) {
        const Slope s(y2 - y, x2 - x);
        if (!segs.empty() && s <= prev) continue;
        segs.push_back({s, static_cast<std::size_t>(x2 - x)});
        walk(x2, y2, s);
        segs.pop_back();
      }
  };
  walk(0, 0, Slope(-1));
  return out;
}

std::size_t brute_rank_count(const FiniteField& f, std::size_t n, std::size_t target) {
  const std::size_t q = f.size(), total = n * n;
  std::size_t count = 0;
  std::vector<std::size_t> idx(total, 0);
  Matrix<Residue> m(n, n, f.zero());
  while (true) {
    for (std::size_t i = 0; i < total; ++i) m.data()[i] = Residue{static_cast<std::uint32_t>(idx[i])};
    count += rank(f, m) == target;
    std::size_t pos = 0;
    while (pos < total && ++idx[pos] == q) idx[pos++] = 0;
    if (pos == total) break;
  }
  return count;
}

}  // namespace

TEST(RandomCensus, SampleZeroIsCanonical) {
  const auto p = make_params(3, 1, 2);
  const auto rep = run_random_census(p, 20, 5);
  ASSERT_EQ(rep.sample_size, 21u);
  ASSERT_EQ(rep.records.size(), 21u);
  EXPECT_FALSE(rep.records[0].seed.has_value());
  EXPECT_EQ(rep.records[0].label(), "canonical");
  EXPECT_EQ(rep.records[0].ell_rank, 2u);
  EXPECT_TRUE(rep.records[0].hasse_nonzero);
  EXPECT_EQ(rep.records[0].np, mu_ordinary_polygon(p));
  EXPECT_EQ(rep.records[1].seed, std::optional<std::uint64_t>(5));
  EXPECT_EQ(rep.records[20].seed, std::optional<std::uint64_t>(24));
}

TEST(RandomCensus, StrataAndChecksAreConsistent) {
  for (const auto& g : census_grid()) {
    const auto p = make_params(g.ell, g.a, g.b);
    const auto rep = run_random_census(p, 100, 1);
    EXPECT_TRUE(rep.passed()) << to_text(rep);
    std::size_t total = 0;
    for (const auto& [key, c] : rep.strata) total += c;
    EXPECT_EQ(total, rep.sample_size);
    for (const auto& rec : rep.records) {
      EXPECT_EQ(recompute_checks(p, rec), rec.checks);
      EXPECT_TRUE(rep.strata.count({rec.ell_rank, to_text(rec.np)}));
      // independent recomputation from the module
      if (rec.seed) {
        const auto m = random_module(p, *rec.seed);
        EXPECT_EQ(ell_rank(hodge(m)), rec.ell_rank);
        EXPECT_EQ(newton_polygon(m), rec.np);
      }
    }
  }
}

TEST(RandomCensus, JobsDoNotChangeTheReport) {
  const auto p = make_params(2, 1, 3, 1, 2);
  const auto one = to_text(run_random_census(p, 40, 7, {1}));
  EXPECT_EQ(to_text(run_random_census(p, 40, 7, {3})), one);
  EXPECT_EQ(to_text(run_random_census(p, 40, 7, {8})), one);
  EXPECT_EQ(to_csv(run_random_census(p, 40, 7, {2})), to_csv(run_random_census(p, 40, 7, {1})));
}

TEST(RandomCensus, RecomputeChecksDetectsTampering) {
  const auto p = make_params(3, 1, 2);
  auto rep = run_random_census(p, 5, 1);
  auto rec = rep.records[0];
  rec.hasse_nonzero = false;
  const auto c = recompute_checks(p, rec);
  EXPECT_FALSE(c.hasse_iff_ell_rank);
  EXPECT_FALSE(c.hasse_iff_newton);
  EXPECT_FALSE(c.all());
  rec = rep.records[0];
  rec.rank_profile.back() += 1;
  EXPECT_FALSE(recompute_checks(p, rec).stabilized);
}

TEST(RandomCensus, FailedChecksFailTheVerdict) {
  const auto p = make_params(3, 1, 2);
  auto rep = run_random_census(p, 5, 1);
  ASSERT_TRUE(rep.passed());
  rep.tallies.front().failures = 1;
  rep.failures.push_back({"canonical", {rep.tallies.front().name}, ""});
  EXPECT_FALSE(rep.passed());
  EXPECT_NE(to_text(rep).find("verdict: fail"), std::string::npos);
}

TEST(Exhaustive, AdmissibleCountMatchesBruteForce) {
  const auto p = make_params(2, 1, 2, 1, 1, 1);
  const auto f = FiniteField::create(2, 2, first_irreducible(2, 2));
  EXPECT_EQ(admissible_matrix_count(p), mpz_class(static_cast<unsigned long>(brute_rank_count(*f, 3, 2))));
  EXPECT_EQ(admissible_matrix_count(p), 79380);
  EXPECT_EQ(admissible_matrix_count(make_params(3, 1, 2, 1, 1, 1)), 47698560);
}

TEST(Exhaustive, EllTwoHasNoCounterexamples) {
  const auto p = make_params(2, 1, 2, 1, 1, 1);
  const auto rep = run_exhaustive_bt1(p);
  EXPECT_TRUE(rep.passed()) << to_text(rep);
  EXPECT_EQ(rep.sample_size, 79380u);
  EXPECT_EQ(rep.space, "79380");
  std::size_t total = 0;
  for (const auto& [key, c] : rep.strata) {
    total += c;
    EXPECT_TRUE(key.first == 0 || key.first == 2);
  }
  EXPECT_EQ(total, 79380u);
}

TEST(Exhaustive, StrataMatchDirectEnumeration) {
  // Ā ranges over rank-2 matrices; count μ-ordinary ones directly
  const auto p = make_params(2, 1, 2, 1, 1, 1);
  const auto f = FiniteField::create(2, 2, first_irreducible(2, 2));
  std::map<std::size_t, std::size_t> by_rank;
  std::vector<std::size_t> idx(9, 0);
  Matrix<Residue> m(3, 3, f->zero());
  while (true) {
    for (std::size_t i = 0; i < 9; ++i) m.data()[i] = Residue{static_cast<std::uint32_t>(idx[i])};
    if (rank(*f, m) == 2) {
      const auto h = hodge(bt1_from_F_block(p, f, m));
      const bool nz = mu_hasse(h).nonvanishing;
      const auto r = ell_rank(h);
      EXPECT_EQ(nz, r == 2);
      ++by_rank[r];
    }
    std::size_t pos = 0;
    while (pos < 9 && ++idx[pos] == 4) idx[pos++] = 0;
    if (pos == 9) break;
  }
  const auto rep = run_exhaustive_bt1(p, {2});
  std::map<std::size_t, std::size_t> reported;
  for (const auto& [key, c] : rep.strata) reported[key.first] += c;
  EXPECT_EQ(reported, by_rank);
}

TEST(Exhaustive, BudgetIsEnforced) {
  const auto p = make_params(3, 1, 2, 1, 1, 1);
  try {
    run_exhaustive_bt1(p, {1, 1000});
    FAIL() << "no BudgetExceeded";
  } catch (const BudgetExceeded& e) {
    EXPECT_EQ(static_cast<double>(e.required()), 47698560.0);
  }
}

TEST(Rigidity, EnumerationMatchesLatticeOracle) {
  for (std::size_t h = 2; h <= 12; h += 2) {
    std::set<std::string> got;
    for (const auto& p : symmetric_polygons(h)) got.insert(to_text(p));
    EXPECT_EQ(got, lattice_symmetric_polygons(h)) << "height " << h;
    EXPECT_EQ(symmetric_polygons(h).size(), got.size());
  }
  EXPECT_TRUE(symmetric_polygons(5).empty());
}

TEST(Rigidity, HoldsForAllSmallHeights) {
  const std::vector<std::tuple<unsigned, unsigned, unsigned, bool>> cases = {
      {1, 2, 1, false}, {1, 3, 1, false}, {1, 4, 1, false}, {2, 3, 1, false}, {1, 1, 1, true}, {2, 2, 1, true},
      {1, 1, 2, true},  {0, 1, 1, true},  {0, 3, 1, true},  {0, 2, 2, true},  {0, 4, 1, true}, {0, 5, 1, true}};
  for (auto [a, b, r, deg] : cases) {
    const auto p = make_params(3, a, b, r, 1, std::nullopt, deg);
    ASSERT_LE(p.height(), 10u);
    const auto res = rigidity_check(p);
    EXPECT_TRUE(res.holds) << a << "," << b << "," << r;
    ASSERT_EQ(res.survivors.size(), 1u);
    EXPECT_EQ(res.survivors[0], mu_ordinary_polygon(p));
    EXPECT_EQ(res.enumerated, lattice_symmetric_polygons(p.height()).size());
    EXPECT_TRUE(verify_rigidity(p));
  }
}

TEST(Rigidity, SurvivorsMatchBruteForceFilter) {
  const auto p = make_params(2, 2, 3);
  const auto ord = mu_ordinary_polygon(p);
  std::size_t survivors = 0;
  for (const auto& text : lattice_symmetric_polygons(p.height())) {
    for (const auto& q : symmetric_polygons(p.height()))
      if (to_text(q) == text && slope_zero_multiplicity(q) >= 4 && lies_on_or_above(q, ord)) ++survivors;
  }
  EXPECT_EQ(survivors, 1u);
}

TEST(Rigidity, Limits) {
  EXPECT_THROW(rigidity_check(make_params(2, 1, 2), 4), BudgetExceeded);
  EXPECT_THROW(rigidity_check(make_params(2, 1, 2), 20, 3), BudgetExceeded);
}

TEST(Reports, TextLayout) {
  const auto p = make_params(3, 1, 2);
  const auto text = to_text(run_random_census(p, 3, 1));
  EXPECT_EQ(text.rfind("census: random\n", 0), 0u) << text;
  EXPECT_NE(text.find("samples: 4\n"), std::string::npos);
  EXPECT_NE(text.find("stratum[ell_rank=2, np={0:2, 1/2:2, 1:2}]:"), std::string::npos) << text;
  EXPECT_NE(text.find("verdict: pass"), std::string::npos);
  const auto csv = to_csv(run_random_census(p, 3, 1));
  EXPECT_EQ(csv.rfind("seed,ell_rank,hasse_nonzero,np\n", 0), 0u);
  EXPECT_NE(csv.find("canonical,2,true,\"{0:2, 1/2:2, 1:2}\""), std::string::npos) << csv;
}
