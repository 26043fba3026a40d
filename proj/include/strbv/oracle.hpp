#pragma once

// Bounded brute-force satisfiability, random formula generation and the
// differential runner that cross-checks the solvers against it.

#include <functional>
#include <string>
#include <vector>

#include "strbv/core.hpp"

namespace strbv {

struct OracleConfig {
  std::size_t max_len = 6;
  std::string alphabet_slice = "ab";
  int per_check_timeout_ms = 60000;
  /// Maximum number of full candidate models evaluated.
  std::uint64_t cap = 20'000'000;
};

class CapExceeded : public Error {
 public:
  CapExceeded() : Error("oracle enumeration cap exceeded") {}
};

/// Extra restriction on a length tuple; `vars` and `lens` are aligned.
using LengthFilter = std::function<bool(const std::vector<std::string>& vars, const std::vector<std::size_t>& lens)>;

struct OracleResult {
  bool sat = false;
  Model model;
  /// Candidate models evaluated before the verdict.
  std::uint64_t checked = 0;
};

/// Returns the first model in the order: length tuples by total length then
/// lexicographically (first variable most significant), strings
/// lexicographically, bit-vector values ascending. `extra_string_vars` are
/// enumerated even when absent from `f`. Throws CapExceeded or TimeoutError.
OracleResult brute_force_sat(const Formula& f, const OracleConfig& o, const SolverConfig& cfg,
                             const LengthFilter& filter = {}, const std::vector<std::string>& extra_string_vars = {});

/// Same enumeration order without pruning, single-threaded. Reference for tests.
OracleResult brute_force_sat_naive(const Formula& f, const OracleConfig& o, const SolverConfig& cfg,
                                   const LengthFilter& filter = {},
                                   const std::vector<std::string>& extra_string_vars = {});

struct GenParams {
  std::uint64_t seed = 1;
  int n_str_vars = 2;
  int n_eqs = 1;
  int n_bv_atoms = 1;
  unsigned width = 2;
  bool allow_diseq = false;
  /// Wraps the atoms in random and/or/not structure instead of a conjunction.
  bool allow_boolean = false;
  /// Adds one bit-vector variable `n` to some comparisons.
  bool allow_bv_var = false;

  /// Throws InputError when a count exceeds its cap.
  void validate() const;
};

/// Deterministic in the seed; uses variables X, Y, Z over the alphabet {a, b}.
Formula random_formula(const GenParams& p);

struct CaseRecord {
  std::uint64_t seed = 0;
  std::string formula;
  Status solve = Status::unknown;
  Status reduce = Status::unknown;
  /// sat, unsat (no model within bound) or unknown (cap or timeout).
  Status oracle = Status::unknown;
  std::string violation;
};

struct Report {
  std::vector<CaseRecord> cases;
  int violations = 0;
  std::string summary() const;
};

/// Runs the arrangement solver, the reduction and the oracle on `n` formulas
/// drawn with seeds p.seed, p.seed + 1, ... Cases run in parallel.
Report differential_run(int n, const GenParams& p, const OracleConfig& o, int solver_timeout_ms = 10000);

}  // namespace strbv
