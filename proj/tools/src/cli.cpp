#include "muhasse_cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include "muhasse/census.hpp"
#include "muhasse/errors.hpp"
#include "muhasse/hasse.hpp"
#include "muhasse/module_io.hpp"
#include "muhasse/newton.hpp"

namespace muhasse::cli {

namespace {

struct ParamFlags {
  unsigned ell = 0;
  unsigned a = 0;
  unsigned b = 0;
  unsigned r = 1;
  unsigned k = 1;
  std::optional<unsigned> N;
  bool allow_degenerate = false;

  void attach(CLI::App* app, bool required) {
    auto* e = app->add_option("--ell", ell, "prime ell");
    auto* oa = app->add_option("--a", a, "signature a");
    auto* ob = app->add_option("--b", b, "signature b");
    if (required) {
      e->required();
      oa->required();
      ob->required();
    }
    app->add_option("--r", r, "multiplicity r")->capture_default_str();
    app->add_option("--k", k, "field degree: coefficients in W(F_{ell^{2k}})")->capture_default_str();
    app->add_option("--N", N, "Witt precision (default 2*(2k)*(a+b)*r + 1)");
  }

  PelParams params() const { return make_params(ell, a, b, r, k, N, allow_degenerate); }
};

std::string read_source(const std::string& path, std::istream& in) {
  if (path == "-") return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::ifstream file(path);
  if (!file) throw InvalidParameters("cannot open module file '" + path + "'");
  return {std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>()};
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

}  // namespace

int parse_and_dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"mu-ordinary Hasse invariant toolkit"};
  app.require_subcommand(1);

  ParamFlags pf;
  std::string module_path;
  std::string format = "text";
  std::size_t count = 1000;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> budget;
  unsigned jobs = 1;

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"text", "csv"}))->capture_default_str();
  };
  auto add_degenerate = [&](CLI::App* sub) {
    sub->add_flag("--allow-a-eq-b", pf.allow_degenerate, "accept a = b (and a = 0)");
  };

  auto* polygon = app.add_subcommand("polygon", "Newton polygon of a module file, or N^ord from parameters");
  pf.attach(polygon, false);
  polygon->add_option("--module", module_path, "module file, - for stdin");
  add_format(polygon);
  add_degenerate(polygon);

  auto* hasse = app.add_subcommand("hasse", "mu-Hasse value, ell-rank and Newton polygon of a module file");
  hasse->add_option("--module", module_path, "module file, - for stdin")->required();
  add_format(hasse);
  add_degenerate(hasse);

  auto* crandom = app.add_subcommand("census-random", "seeded random census");
  pf.attach(crandom, true);
  crandom->add_option("--count", count, "number of random samples")->capture_default_str();
  crandom->add_option("--seed", seed, "first seed")->capture_default_str();
  crandom->add_option("--jobs", jobs, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  add_format(crandom);
  add_degenerate(crandom);

  auto* cexh = app.add_subcommand("census-exhaustive", "all mod-ell modules of the given signature");
  pf.attach(cexh, true);
  cexh->add_option("--budget", budget, "maximum number of matrices (default 10000000)");
  cexh->add_option("--jobs", jobs, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  add_format(cexh);
  add_degenerate(cexh);

  auto* rigidity = app.add_subcommand("rigidity", "enumerate symmetric polygons above N^ord");
  pf.attach(rigidity, true);
  rigidity->add_option("--budget", budget, "maximum number of enumerated polygons (default 10000000)");
  add_degenerate(rigidity);

  auto* canonical = app.add_subcommand("canonical", "print the canonical mu-ordinary module");
  pf.attach(canonical, true);
  add_degenerate(canonical);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (polygon->parsed()) {
      NewtonPolygon np;
      if (!module_path.empty()) {
        np = newton_polygon(read_module(read_source(module_path, in), pf.allow_degenerate));
      } else {
        if (pf.ell == 0) throw InvalidParameters("polygon needs --module or --ell/--a/--b");
        np = mu_ordinary_polygon(pf.params());
      }
      if (format == "csv")
        out << to_csv(np);
      else
        out << to_text(np) << '\n';
      return kSuccess;
    }

    if (hasse->parsed()) {
      const auto module = read_module(read_source(module_path, in), pf.allow_degenerate);
      const auto& p = module.params();
      const auto h = muhasse::hodge(module);
      const auto value = mu_hasse(h);
      const std::size_t rk = ell_rank(h);
      const bool rank_ok = value.nonvanishing == (rk == 2 * p.a * p.r);
      std::optional<NewtonPolygon> np;
      std::string np_text = "unavailable (precision too low)";
      try {
        np = newton_polygon(module);
        np_text = to_text(*np);
      } catch (const PrecisionError&) {
      }
      const bool np_ok = !np || value.nonvanishing == (*np == mu_ordinary_polygon(p));
      const bool pass = rank_ok && np_ok;
      const std::string field_value = h.field->to_string(value.value);
      if (format == "csv") {
        out << "mu_hasse_nonzero,mu_hasse_value,ell_rank,newton_polygon,verdict\n";
        out << yes_no(value.nonvanishing) << ",\"" << field_value << "\"," << rk << ",\"" << np_text << "\","
            << (pass ? "pass" : "fail") << '\n';
      } else {
        out << "mu_hasse_nonzero: " << yes_no(value.nonvanishing) << '\n';
        out << "mu_hasse_value: " << field_value << '\n';
        out << "ell_rank: " << rk << '\n';
        out << "newton_polygon: " << np_text << '\n';
        out << "mu_ordinary: " << yes_no(is_mu_ordinary(h)) << '\n';
        out << "check.hasse_iff_ell_rank: " << (rank_ok ? "pass" : "FAIL") << '\n';
        out << "check.hasse_iff_newton: " << (np ? (np_ok ? "pass" : "FAIL") : "skipped") << '\n';
        out << "verdict: " << (pass ? "pass" : "fail") << '\n';
      }
      return pass ? kSuccess : kVerdictFailed;
    }

    if (crandom->parsed() || cexh->parsed()) {
      CensusOptions opts;
      opts.jobs = jobs;
      if (budget) opts.budget = *budget;
      const auto report = crandom->parsed() ? run_random_census(pf.params(), count, seed, opts)
                                            : run_exhaustive_bt1(pf.params(), opts);
      out << (format == "csv" ? to_csv(report) : to_text(report));
      return report.passed() ? kSuccess : kVerdictFailed;
    }

    if (rigidity->parsed()) {
      const auto res = rigidity_check(pf.params(), 20, budget.value_or(10'000'000));
      out << "height: " << mu_ordinary_polygon(pf.params()).height() << '\n';
      out << "enumerated: " << res.enumerated << '\n';
      out << "survivors: " << res.survivors.size() << '\n';
      for (const auto& s : res.survivors) out << "survivor: " << to_text(s) << '\n';
      out << "rigidity: " << yes_no(res.holds) << '\n';
      return res.holds ? kSuccess : kVerdictFailed;
    }

    if (canonical->parsed()) {
      out << write_module(canonical_mu_ordinary(pf.params()));
      return kSuccess;
    }
  } catch (const ParseError& e) {
    err << "parse error: " << (module_path == "-" ? "<stdin>" : module_path) << ':' << e.what() << '\n';
    return kUsageError;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace muhasse::cli
