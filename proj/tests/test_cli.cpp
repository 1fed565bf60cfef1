#include <gtest/gtest.h>

#include <sstream>

#include "muhasse/dieudonne.hpp"
#include "muhasse/module_io.hpp"
#include "muhasse_cli/cli.hpp"

using namespace muhasse;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = cli::parse_and_dispatch(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::string canonical_text(const std::string& ell, const std::string& a, const std::string& b) {
  return run({"canonical", "--ell", ell, "--a", a, "--b", b}).out;
}

}  // namespace

TEST(Cli, CanonicalPolygon) {
  const auto mod = canonical_text("3", "1", "2");
  const auto r = run({"polygon", "--module", "-"}, mod);
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "{0:2, 1/2:2, 1:2}\n");
  const auto csv = run({"polygon", "--module", "-", "--format", "csv"}, mod);
  EXPECT_EQ(csv.out, "0/1,2\n1/2,2\n1/1,2\n");
  EXPECT_EQ(run({"polygon", "--ell", "3", "--a", "1", "--b", "2"}).out, "{0:2, 1/2:2, 1:2}\n");
}

TEST(Cli, HasseGolden) {
  const auto r = run({"hasse", "--module", "-"}, canonical_text("3", "1", "2"));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out,
            "mu_hasse_nonzero: true\n"
            "mu_hasse_value: 1,0\n"
            "ell_rank: 2\n"
            "newton_polygon: {0:2, 1/2:2, 1:2}\n"
            "mu_ordinary: true\n"
            "check.hasse_iff_ell_rank: pass\n"
            "check.hasse_iff_newton: pass\n"
            "verdict: pass\n");
}

TEST(Cli, HasseOnRandomModules) {
  const auto p = make_params(2, 1, 3);
  bool saw_zero = false;
  for (std::uint64_t s = 0; s < 40; ++s) {
    const auto r = run({"hasse", "--module", "-"}, write_module(random_module(p, s)));
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("verdict: pass"), std::string::npos);
    saw_zero |= r.out.find("mu_hasse_nonzero: false") != std::string::npos;
  }
  EXPECT_TRUE(saw_zero);
}

TEST(Cli, ExhaustiveCensus) {
  const auto r = run({"census-exhaustive", "--ell", "2", "--a", "1", "--b", "2", "--format", "csv"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "ell_rank,count\n0,18900\n2,60480\n");
  const auto budget = run({"census-exhaustive", "--ell", "3", "--a", "1", "--b", "2", "--budget", "100"});
  EXPECT_EQ(budget.code, 2);
  EXPECT_FALSE(budget.err.empty());
}

TEST(Cli, RandomCensusIsDeterministicAcrossJobs) {
  const std::vector<std::string> base = {"census-random", "--ell", "3", "--a", "1", "--b", "2", "--count", "30",
                                         "--seed", "4"};
  auto with_jobs = [&](const std::string& j) {
    auto a = base;
    a.insert(a.end(), {"--jobs", j});
    return run(a);
  };
  const auto one = with_jobs("1");
  EXPECT_EQ(one.code, 0);
  EXPECT_EQ(with_jobs("4").out, one.out);
  EXPECT_EQ(run(base).out, one.out);
  EXPECT_NE(one.out.find("samples: 31\n"), std::string::npos);
}

TEST(Cli, Rigidity) {
  const auto r = run({"rigidity", "--ell", "2", "--a", "1", "--b", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "height: 6\nenumerated: 5\nsurvivors: 1\nsurvivor: {0:2, 1/2:2, 1:2}\nrigidity: true\n");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"hasse", "--module", "-", "--bogus"}, canonical_text("3", "1", "2")).code, 2);
  EXPECT_EQ(run({"hasse"}).code, 2);
  EXPECT_EQ(run({"polygon", "--ell", "3", "--a", "1", "--b", "2", "--format", "xml"}).code, 2);
  const auto bad = run({"canonical", "--ell", "3", "--a", "2", "--b", "1"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_FALSE(bad.err.empty());
  EXPECT_EQ(run({"canonical", "--ell", "4", "--a", "1", "--b", "2"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, EqualSignatureNeedsTheOverride) {
  EXPECT_EQ(run({"canonical", "--ell", "3", "--a", "1", "--b", "1"}).code, 2);
  const auto ok = run({"canonical", "--ell", "3", "--a", "1", "--b", "1", "--allow-a-eq-b"});
  EXPECT_EQ(ok.code, 0);
  const auto poly = run({"polygon", "--module", "-", "--allow-a-eq-b"}, ok.out);
  EXPECT_EQ(poly.code, 0) << poly.err;
  EXPECT_EQ(poly.out, "{0:2, 1:2}\n");
  EXPECT_EQ(run({"polygon", "--module", "-"}, ok.out).code, 2);
}

TEST(Cli, MalformedModuleReportsPosition) {
  const auto r = run({"hasse", "--module", "-"}, "ell=3 a=1 b=2 r=1 k=1\nA:\n0,0 x,0\n");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("<stdin>:3:5:"), std::string::npos) << r.err;
  const auto missing = run({"hasse", "--module", "/nonexistent/file.txt"});
  EXPECT_EQ(missing.code, 2);
}

TEST(Cli, CanonicalRoundTrip) {
  for (auto [ell, a, b] : {std::tuple{"2", "1", "2"}, {"5", "2", "3"}}) {
    const auto text = canonical_text(ell, a, b);
    const auto m = read_module(text);
    EXPECT_EQ(m, canonical_mu_ordinary(m.params()));
    EXPECT_EQ(write_module(m), text);
  }
}
