#include "muhasse/census.hpp"

#include <algorithm>
#include <numeric>
#include <exception>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "muhasse/errors.hpp"
#include "muhasse/hasse.hpp"
#include "muhasse/linalg.hpp"
#include "muhasse/module_io.hpp"

namespace muhasse {

namespace {

// Runs body(i) for i in [0, count) on `jobs` threads; rethrows the first
// exception by index.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& body) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> workers;
  for (unsigned t = 0; t < jobs; ++t)
    workers.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += jobs) {
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& w : workers) w.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

bool stabilized_on_window(const PelParams& p, const std::vector<std::size_t>& profile) {
  const std::size_t start = (p.a + p.b) * p.r;
  for (std::size_t j = start; j < profile.size(); ++j)
    if (profile[j] != profile[start]) return false;
  return true;
}

bool rank_bounded(const PelParams& p, const std::vector<std::size_t>& profile) {
  for (std::size_t j = 1; j < profile.size(); ++j)
    if (profile[j] > 2 * p.a * p.r) return false;
  return true;
}

std::vector<std::string> failed_names(const RecordChecks& c) {
  std::vector<std::string> out;
  if (!c.hasse_iff_ell_rank) out.push_back("hasse_iff_ell_rank");
  if (!c.hasse_iff_newton) out.push_back("hasse_iff_newton");
  if (!c.symmetric) out.push_back("symmetry");
  if (!c.dominates) out.push_back("dominance");
  if (!c.slope_zero_is_rank) out.push_back("slope_zero_eq_ell_rank");
  if (!c.rank_bounded) out.push_back("ell_rank_bound");
  if (!c.stabilized) out.push_back("stabilization");
  return out;
}

CensusRecord census_record(const DieudonneModule& module, std::optional<std::uint64_t> seed) {
  CensusRecord rec;
  rec.seed = seed;
  const auto h = hodge(module);
  rec.hasse_nonzero = mu_hasse(h).nonvanishing;
  rec.rank_profile = ver_rank_profile(h);
  rec.ell_rank = rec.rank_profile.back();
  rec.np = newton_polygon(module);
  rec.checks = recompute_checks(module.params(), rec);
  return rec;
}

void write_params(std::ostream& out, const PelParams& p) {
  out << "ell: " << p.ell << "\na: " << p.a << "\nb: " << p.b << "\nr: " << p.r << "\nk: " << p.k << "\nN: " << p.N
      << '\n';
}

// Column-by-column enumeration of the n×n matrices of rank `target`.
class RankEnumerator {
 public:
  RankEnumerator(const FiniteField& field, std::size_t n, std::size_t target)
      : field_(field), n_(n), target_(target), q_(field.size()) {
    for (std::uint64_t i = 0, v = 1; i < n_; ++i, v *= q_) vectors_ = v * q_;
  }

  std::uint64_t first_column_choices() const { return vectors_; }

  // Visits every matrix whose first column is vector number `first`.
  void run(std::uint64_t first, const std::function<void(const Matrix<Residue>&)>& visit) {
    Matrix<Residue> m(n_, n_, field_.zero());
    std::vector<std::vector<Residue>> basis;
    auto v = vector_of(first);
    m.set_column(0, v);
    if (reduce_against(basis, v)) {
      if (target_ == 0) return;
      basis.push_back(normalized(v));
    } else if (target_ > n_ - 1) {
      return;
    }
    recurse(1, m, basis, visit);
  }

 private:
  std::vector<Residue> vector_of(std::uint64_t index) const {
    std::vector<Residue> v(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      v[i] = Residue{static_cast<std::uint32_t>(index % q_)};
      index /= q_;
    }
    return v;
  }

  // Echelon basis: each stored vector has a leading 1 at a distinct position
  // and zeros there in every other stored vector.
  bool reduce_against(const std::vector<std::vector<Residue>>& basis, std::vector<Residue>& v) const {
    for (const auto& b : basis) {
      std::size_t lead = 0;
      while (field_.is_zero(b[lead])) ++lead;
      if (field_.is_zero(v[lead])) continue;
      const Residue c = field_.neg(v[lead]);
      for (std::size_t i = 0; i < n_; ++i) field_.add_product(v[i], c, b[i]);
    }
    for (const auto& x : v)
      if (!field_.is_zero(x)) return true;
    return false;
  }

  std::vector<Residue> normalized(std::vector<Residue> v) const {
    std::size_t lead = 0;
    while (field_.is_zero(v[lead])) ++lead;
    const Residue inv = field_.inverse(v[lead]);
    for (auto& x : v) x = field_.mul(x, inv);
    return v;
  }

  void recurse(std::size_t col, Matrix<Residue>& m, std::vector<std::vector<Residue>>& basis,
               const std::function<void(const Matrix<Residue>&)>& visit) {
    if (col == n_) {
      if (basis.size() == target_) visit(m);
      return;
    }
    const std::size_t remaining = n_ - col - 1;
    if (basis.size() < target_) {
      for (std::uint64_t idx = 0; idx < vectors_; ++idx) {
        auto v = vector_of(idx);
        auto w = v;
        const bool independent = reduce_against(basis, w);
        if (!independent && basis.size() + remaining < target_) continue;
        m.set_column(col, v);
        if (independent) {
          // keep the basis reduced: clear the new lead from the old vectors
          auto nv = normalized(std::move(w));
          std::size_t lead = 0;
          while (field_.is_zero(nv[lead])) ++lead;
          auto saved = basis;
          for (auto& b : basis) {
            if (field_.is_zero(b[lead])) continue;
            const Residue c = field_.neg(b[lead]);
            for (std::size_t i = 0; i < n_; ++i) field_.add_product(b[i], c, nv[i]);
          }
          basis.push_back(std::move(nv));
          recurse(col + 1, m, basis, visit);
          basis = std::move(saved);
        } else {
          recurse(col + 1, m, basis, visit);
        }
      }
    } else {
      // only columns in the current span
      const std::size_t d = basis.size();
      std::uint64_t combos = 1;
      for (std::size_t i = 0; i < d; ++i) combos *= q_;
      for (std::uint64_t idx = 0; idx < combos; ++idx) {
        std::vector<Residue> v(n_, field_.zero());
        std::uint64_t t = idx;
        for (std::size_t i = 0; i < d; ++i) {
          const Residue c{static_cast<std::uint32_t>(t % q_)};
          t /= q_;
          if (field_.is_zero(c)) continue;
          for (std::size_t r = 0; r < n_; ++r) field_.add_product(v[r], c, basis[i][r]);
        }
        m.set_column(col, v);
        recurse(col + 1, m, basis, visit);
      }
    }
  }

  const FiniteField& field_;
  std::size_t n_;
  std::size_t target_;
  std::uint64_t q_;
  std::uint64_t vectors_ = 1;
};

}  // namespace

RecordChecks recompute_checks(const PelParams& p, const CensusRecord& rec) {
  RecordChecks c;
  const std::size_t two_ar = 2 * p.a * p.r;
  const auto ord = mu_ordinary_polygon(p);
  c.hasse_iff_ell_rank = rec.hasse_nonzero == (rec.ell_rank == two_ar);
  c.hasse_iff_newton = rec.hasse_nonzero == (rec.np == ord);
  c.symmetric = is_symmetric(rec.np);
  c.dominates = rec.np.height() == ord.height() && rec.np.endpoint() == ord.endpoint() && lies_on_or_above(rec.np, ord);
  c.slope_zero_is_rank = slope_zero_multiplicity(rec.np) == rec.ell_rank;
  c.rank_bounded = rank_bounded(p, rec.rank_profile);
  c.stabilized = stabilized_on_window(p, rec.rank_profile);
  return c;
}

bool CensusReport::passed() const {
  for (const auto& t : tallies)
    if (t.failures) return false;
  return failures.empty();
}

CensusReport run_random_census(const PelParams& params, std::size_t count, std::uint64_t seed0,
                               const CensusOptions& options) {
  params.validate();
  if (count < 1) throw PreconditionError("census count must be at least 1");
  CensusReport report;
  report.kind = "random";
  report.params = params;
  report.count = count;
  report.seed0 = seed0;
  report.sample_size = count + 1;
  report.records.resize(count + 1);
  std::vector<std::string> texts(count + 1);

  parallel_for(count + 1, options.jobs, [&](std::size_t i) {
    const std::optional<std::uint64_t> seed = i == 0 ? std::nullopt : std::optional<std::uint64_t>(seed0 + i - 1);
    const auto module = seed ? random_module(params, *seed) : canonical_mu_ordinary(params);
    try {
      report.records[i] = census_record(module, seed);
    } catch (const PrecisionError& e) {
      throw PrecisionError(std::string(e.what()) + " (sample " + (seed ? "seed " + std::to_string(*seed) : "canonical") + ")");
    }
    if (!report.records[i].checks.all()) texts[i] = write_module(module);
  });

  report.tallies = {{"hasse_iff_ell_rank"}, {"hasse_iff_newton"}, {"symmetry"}, {"dominance"},
                    {"slope_zero_eq_ell_rank"}, {"ell_rank_bound"}, {"stabilization"}};
  for (std::size_t i = 0; i <= count; ++i) {
    const auto& rec = report.records[i];
    ++report.strata[{rec.ell_rank, to_text(rec.np)}];
    const auto& c = rec.checks;
    const bool flags[] = {c.hasse_iff_ell_rank, c.hasse_iff_newton, c.symmetric,   c.dominates,
                          c.slope_zero_is_rank, c.rank_bounded,     c.stabilized};
    for (std::size_t t = 0; t < report.tallies.size(); ++t)
      if (!flags[t]) ++report.tallies[t].failures;
    if (!c.all()) report.failures.push_back({rec.label(), failed_names(c), texts[i]});
  }
  return report;
}

mpz_class admissible_matrix_count(const PelParams& params) {
  mpz_class q;
  mpz_ui_pow_ui(q.get_mpz_t(), params.ell, params.residue_degree());
  const unsigned n = params.n();
  const unsigned rk = params.b * params.r;
  mpz_class num = 1, den = 1, qn, qi, qr;
  mpz_pow_ui(qn.get_mpz_t(), q.get_mpz_t(), n);
  mpz_pow_ui(qr.get_mpz_t(), q.get_mpz_t(), rk);
  for (unsigned i = 0; i < rk; ++i) {
    mpz_pow_ui(qi.get_mpz_t(), q.get_mpz_t(), i);
    num *= (qn - qi) * (qn - qi);
    den *= qr - qi;
  }
  return num / den;
}

CensusReport run_exhaustive_bt1(const PelParams& params, const CensusOptions& options) {
  params.validate();
  const mpz_class space = admissible_matrix_count(params);
  if (space > mpz_class(std::to_string(options.budget)))
    throw BudgetExceeded("exhaustive census needs " + space.get_str() + " matrices, budget is " +
                             std::to_string(options.budget),
                         static_cast<long double>(space.get_d()));

  const PelParams p1 = params.with_precision(1);
  const auto field = ring_for(p1)->residue_field_ptr();
  const std::size_t n = params.n();
  const std::size_t two_ar = 2 * params.a * params.r;
  RankEnumerator enumerator(*field, n, params.b * params.r);

  struct Partial {
    std::map<std::size_t, std::size_t> by_rank;
    std::size_t visited = 0;
    std::size_t fail_equiv = 0, fail_bound = 0, fail_stable = 0;
    std::vector<std::pair<Matrix<Residue>, std::vector<std::string>>> failures;
  };
  const std::uint64_t firsts = enumerator.first_column_choices();
  std::vector<Partial> partials(firsts);
  parallel_for(firsts, options.jobs, [&](std::size_t first) {
    RankEnumerator local = enumerator;
    Partial& out = partials[first];
    local.run(first, [&](const Matrix<Residue>& a) {
      const auto bt1 = bt1_from_F_block(p1, field, a);
      const auto h = hodge(bt1);
      const bool nonzero = mu_hasse(h).nonvanishing;
      const auto profile = ver_rank_profile(h);
      const std::size_t rk = profile.back();
      ++out.visited;
      ++out.by_rank[rk];
      std::vector<std::string> failed;
      if (nonzero != (rk == two_ar)) {
        ++out.fail_equiv;
        failed.push_back("hasse_iff_ell_rank");
      }
      if (!rank_bounded(params, profile)) {
        ++out.fail_bound;
        failed.push_back("ell_rank_bound");
      }
      if (!stabilized_on_window(params, profile)) {
        ++out.fail_stable;
        failed.push_back("stabilization");
      }
      if (!failed.empty()) out.failures.emplace_back(a, std::move(failed));
    });
  });

  CensusReport report;
  report.kind = "exhaustive";
  report.params = p1;
  report.space = space.get_str();
  report.tallies = {{"hasse_iff_ell_rank"}, {"ell_rank_bound"}, {"stabilization"}};
  for (auto& part : partials) {
    report.sample_size += part.visited;
    for (const auto& [rk, c] : part.by_rank) report.strata[{rk, "-"}] += c;
    report.tallies[0].failures += part.fail_equiv;
    report.tallies[1].failures += part.fail_bound;
    report.tallies[2].failures += part.fail_stable;
    for (auto& [a, failed] : part.failures)
      report.failures.push_back({"matrix " + std::to_string(report.failures.size()), std::move(failed),
                                 write_bt1_module(p1, *field, a)});
  }
  if (std::to_string(report.sample_size) != report.space)
    throw InternalError("enumeration visited " + std::to_string(report.sample_size) + " matrices, expected " +
                        report.space);
  return report;
}

// ---------------------------------------------------------------------------
// Rigidity

std::vector<NewtonPolygon> symmetric_polygons(std::size_t height, std::uint64_t budget) {
  if (height % 2 != 0) return {};
  const std::size_t half = height / 2;
  // slopes p/q < 1/2 with q ≤ half, ascending
  std::vector<Slope> small;
  for (long long q = 1; q <= static_cast<long long>(std::max<std::size_t>(half, 1)); ++q)
    for (long long p = 0; 2 * p < q; ++p)
      if (std::gcd(p, q) == 1) small.push_back(Slope(p, q));
  std::sort(small.begin(), small.end());

  std::vector<NewtonPolygon> out;
  std::vector<SlopeSegment> chosen;
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t idx, std::size_t used) {
    if (idx == small.size()) {
      std::vector<SlopeSegment> segs = chosen;
      for (const auto& s : chosen) segs.push_back({Slope(1) - s.slope, s.multiplicity});
      if (height > 2 * used) segs.push_back({Slope(1, 2), height - 2 * used});
      if (out.size() >= budget) throw BudgetExceeded("rigidity enumeration exceeds the budget", static_cast<long double>(budget) + 1);
      out.emplace_back(std::move(segs));
      return;
    }
    go(idx + 1, used);
    const std::size_t q = static_cast<std::size_t>(small[idx].denominator());
    for (std::size_t len = q; used + len <= half; len += q) {
      chosen.push_back({small[idx], len});
      go(idx + 1, used + len);
      chosen.pop_back();
    }
  };
  go(0, 0);
  return out;
}

RigidityResult rigidity_check(const PelParams& params, std::size_t max_height, std::uint64_t budget) {
  params.validate();
  const auto ord = mu_ordinary_polygon(params);
  const std::size_t height = ord.height();
  if (height > max_height)
    throw BudgetExceeded("rigidity enumeration limited to height " + std::to_string(max_height) + ", got " +
                             std::to_string(height),
                         static_cast<long double>(height));
  RigidityResult res;
  const auto all = symmetric_polygons(height, budget);
  res.enumerated = all.size();
  for (const auto& p : all)
    if (slope_zero_multiplicity(p) >= 2 * params.a * params.r && lies_on_or_above(p, ord)) res.survivors.push_back(p);
  res.holds = res.survivors.size() == 1 && res.survivors.front() == ord;
  return res;
}

bool verify_rigidity(const PelParams& params) { return rigidity_check(params).holds; }

// ---------------------------------------------------------------------------
// Reports

std::string to_text(const CensusReport& report) {
  std::ostringstream out;
  out << "census: " << report.kind << '\n';
  write_params(out, report.params);
  if (report.kind == "random") {
    out << "count: " << report.count << '\n';
    out << "seed0: " << report.seed0 << '\n';
  } else {
    out << "space: " << report.space << '\n';
  }
  out << "samples: " << report.sample_size << '\n';
  for (const auto& [key, c] : report.strata) {
    out << "stratum[ell_rank=" << key.first;
    if (key.second != "-") out << ", np=" << key.second;
    out << "]: " << c << '\n';
  }
  for (const auto& t : report.tallies)
    out << "check." << t.name << ": " << (t.failures ? "FAIL (" + std::to_string(t.failures) + ")" : std::string("pass"))
        << '\n';
  out << "failures: " << report.failures.size() << '\n';
  for (const auto& f : report.failures) {
    out << "failure[" << f.label << "]:";
    for (const auto& c : f.failed_checks) out << ' ' << c;
    out << '\n';
    std::istringstream lines(f.module_text);
    for (std::string line; std::getline(lines, line);) out << "  " << line << '\n';
  }
  out << "verdict: " << (report.passed() ? "pass" : "fail") << '\n';
  return out.str();
}

std::string to_csv(const CensusReport& report) {
  std::ostringstream out;
  if (report.kind == "random") {
    out << "seed,ell_rank,hasse_nonzero,np\n";
    for (const auto& r : report.records)
      out << r.label() << ',' << r.ell_rank << ',' << (r.hasse_nonzero ? "true" : "false") << ",\"" << to_text(r.np)
          << "\"\n";
  } else {
    out << "ell_rank,count\n";
    for (const auto& [key, c] : report.strata) out << key.first << ',' << c << '\n';
  }
  return out.str();
}

}  // namespace muhasse
