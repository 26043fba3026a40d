#pragma once

// Arrangement-based solving of word equations with bit-vector length
// constraints: split, prune by length, merge, refine and recurse.

#include <set>
#include <string>
#include <vector>

#include "strbv/bvsolve.hpp"
#include "strbv/core.hpp"
#include "strbv/frontend.hpp"

namespace strbv {

struct WordEquation {
  Word lhs, rhs;
  friend bool operator==(const WordEquation&, const WordEquation&) = default;
};

std::string to_string(const Word& w);
std::string to_string(const WordEquation& e);

/// Name of the length variable attached to string variable `x`.
std::string length_var(const std::string& x);
/// Inverse of length_var; returns the input unchanged for other names.
std::string string_of_length_var(const std::string& name);

/// sum of leaf lengths of `w`, with variables mapped to their length variables.
LinTerm length_term(const Word& w, std::uint64_t mask);

struct LenAssert {
  LinTerm lhs, rhs;
};

struct Arrangement {
  WordEquation eq;
  std::vector<WordEquation> sub_eqs;
  std::vector<LenAssert> len_asserts;
  /// Fresh temporaries introduced by this split; all are nonempty.
  std::vector<std::string> fresh;
};

class FreshNames {
 public:
  explicit FreshNames(std::set<std::string> taken = {}, int counter = 0) : taken_(std::move(taken)), counter_(counter) {}
  std::string next();
  int counter() const { return counter_; }

 private:
  std::set<std::string> taken_;
  int counter_;
};

/// Splits on the head pair of `eq`, assuming every variable is nonempty.
std::vector<Arrangement> gen_arrangements(const WordEquation& eq, FreshNames& fresh, unsigned width);

/// Keeps the arrangements whose length assertions are consistent with `q_l`.
std::vector<Arrangement> prune_by_length(const std::vector<Arrangement>& arrs, const LinearBvSystem& q_l,
                                         const Deadline& deadline = Deadline::never());

struct MergePlan {
  std::string var;
  /// Indices of the equations mentioning `var`.
  std::vector<std::size_t> eq_indices;
  /// Each combination picks one arrangement per equation, aligned with eq_indices.
  std::vector<std::vector<Arrangement>> merged;
  /// Set when some combination was dropped because its definitions are cyclic.
  bool overlap = false;
};

/// One plan per variable, in first-occurrence order over `eqs`. Throws
/// DnfBudgetError when a product exceeds `max_dnf` combinations.
std::vector<MergePlan> merge_arrangements(const std::vector<WordEquation>& eqs,
                                          const std::vector<std::vector<Arrangement>>& per_eq,
                                          const LinearBvSystem& q_l, int max_dnf,
                                          const Deadline& deadline = Deadline::never());

struct EquationSystem {
  std::vector<WordEquation> word_eqs;
  /// Eliminated variables, each defined over free variables only.
  std::vector<std::pair<std::string, Word>> definitions;
  LinearBvSystem lengths;
  std::vector<WordEquation> diseqs;
  int depth = 0;
  std::set<std::string> nonempty, empty;
  /// All string variables (input and fresh) in first-occurrence order.
  std::vector<std::string> str_vars;
  int fresh_counter = 0;

  static EquationSystem from_disjunct(const Disjunct& d, const SolverConfig& cfg);
  void add_string_var(const std::string& x);
};

EquationSystem refine(const EquationSystem& sys, const MergePlan& plan, std::size_t choice);

struct SolveStats {
  std::uint64_t arrangements = 0;
  std::uint64_t pruned = 0;
  std::uint64_t guesses = 0;
  int max_depth = 0;
  /// Length search traces of the solved form that produced the model.
  std::vector<SearchState> traces;
};

struct BuildOutcome {
  SolverResult result;
  /// Full internal assignment, including fresh variables.
  Model full;
};

/// Materializes strings for a system in solved form.
BuildOutcome build_model(const EquationSystem& solved, const Assignment& lengths, const SolverConfig& cfg);

/// Solves one conjunction; Sat models are validated against `d` and restricted
/// to its free variables.
SolverResult solve_disjunct(const Disjunct& d, const SolverConfig& cfg, const Deadline& deadline,
                            SolveStats* stats = nullptr);

/// Expands `assertions` into DNF and solves the disjuncts in order until one
/// is Sat. Unknown or Timeout on any disjunct prevents an Unsat verdict.
SolverResult solve_formula(const std::vector<Formula>& assertions, const SolverConfig& cfg, const Deadline& deadline,
                           SolveStats* stats = nullptr);

}  // namespace strbv
