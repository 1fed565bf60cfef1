#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "muhasse/dieudonne.hpp"
#include "muhasse/newton.hpp"

namespace muhasse {

struct RecordChecks {
  bool hasse_iff_ell_rank = true;   // μH ≠ 0 ⟺ ℓ-rank = 2ar
  bool hasse_iff_newton = true;     // μH ≠ 0 ⟺ NP = N^ord
  bool symmetric = true;            // NP symmetric
  bool dominates = true;            // NP on or above N^ord
  bool slope_zero_is_rank = true;   // slope-0 multiplicity = ℓ-rank
  bool rank_bounded = true;         // rank(ver^j) ≤ 2ar for j ≥ 1
  bool stabilized = true;           // rank(ver^j) constant on [(a+b)r, 2(a+b)r]

  bool all() const {
    return hasse_iff_ell_rank && hasse_iff_newton && symmetric && dominates && slope_zero_is_rank && rank_bounded &&
           stabilized;
  }
  friend bool operator==(const RecordChecks&, const RecordChecks&) = default;
};

struct CensusRecord {
  std::optional<std::uint64_t> seed;  // empty for the canonical module
  std::size_t ell_rank = 0;
  NewtonPolygon np;
  bool hasse_nonzero = false;
  std::vector<std::size_t> rank_profile;
  RecordChecks checks;

  std::string label() const { return seed ? std::to_string(*seed) : "canonical"; }
};

/// Recomputes the verdicts of a record from its stored data.
RecordChecks recompute_checks(const PelParams& params, const CensusRecord& record);

struct CensusFailure {
  std::string label;
  std::vector<std::string> failed_checks;
  std::string module_text;
};

struct CheckTally {
  std::string name;
  std::size_t failures = 0;
};

struct CensusReport {
  std::string kind;  // random | exhaustive
  PelParams params;
  std::size_t count = 0;     // random: requested count
  std::uint64_t seed0 = 0;   // random: first seed
  std::string space;         // exhaustive: number of admissible matrices
  std::size_t sample_size = 0;
  std::map<std::pair<std::size_t, std::string>, std::size_t> strata;  // (ℓ-rank, polygon text or "-") → count
  std::vector<CheckTally> tallies;
  std::vector<CensusRecord> records;  // random census only
  std::vector<CensusFailure> failures;

  bool passed() const;
};

struct CensusOptions {
  unsigned jobs = 1;
  std::uint64_t budget = 10'000'000;
};

/// Sample 0 is the canonical μ-ordinary module; samples 1..count use seeds
/// seed0, ..., seed0 + count − 1.
CensusReport run_random_census(const PelParams& params, std::size_t count, std::uint64_t seed0,
                               const CensusOptions& options = {});

/// Number of n×n matrices over F_q of rank br.
mpz_class admissible_matrix_count(const PelParams& params);

/// All Ā over F_{ℓ^{2k}} of rank br, each completed to a BT₁ module.
CensusReport run_exhaustive_bt1(const PelParams& params, const CensusOptions& options = {});

/// Symmetric polygons of height 2(a+b)r with slopes in [0, 1] and integral
/// breakpoints, in a fixed order.
std::vector<NewtonPolygon> symmetric_polygons(std::size_t height, std::uint64_t budget = 10'000'000);

struct RigidityResult {
  std::size_t enumerated = 0;
  std::vector<NewtonPolygon> survivors;  // on or above N^ord with slope-0 multiplicity ≥ 2ar
  bool holds = false;                    // survivors == {N^ord}
};

RigidityResult rigidity_check(const PelParams& params, std::size_t max_height = 20,
                              std::uint64_t budget = 10'000'000);
bool verify_rigidity(const PelParams& params);

std::string to_text(const CensusReport& report);
std::string to_csv(const CensusReport& report);

}  // namespace muhasse
