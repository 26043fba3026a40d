#pragma once

// Reduction of length constraints to length-congruence languages: each
// satisfying assignment of the substituted length variables yields one
// disjunct of word equations plus per-variable congruence filters.

#include <map>
#include <regex>
#include <string>
#include <vector>

#include "strbv/bvsolve.hpp"
#include "strbv/core.hpp"
#include "strbv/frontend.hpp"
#include "strbv/oracle.hpp"

namespace strbv {

/// Strings whose integer length is congruent to `residue` modulo 2^width.
struct LengthCongruence {
  std::uint64_t residue = 0;
  unsigned width = 1;
  std::string alphabet;

  /// 2^width; requires width < 64.
  std::uint64_t modulus() const;
  bool contains_length(std::uint64_t len) const;
  friend bool operator==(const LengthCongruence&, const LengthCongruence&) = default;
};

LengthCongruence length_congruence_of(std::uint64_t c, unsigned width, const std::string& alphabet);
bool congruence_contains(std::string_view s, const LengthCongruence& l);

/// "([a-b]^4)*[a-b]^1" for residue 1, modulus 4 and alphabet "ab".
std::string regex_render(const LengthCongruence& l);
/// A rendered regex compiled once for repeated matching.
class RenderedRegex {
 public:
  explicit RenderedRegex(const std::string& rendered);
  bool matches(std::string_view s) const;

 private:
  std::regex re_;
};

/// Matches `s` against a rendered regex (the `^n` repetition is translated to
/// a bounded quantifier for std::regex).
bool regex_matches(const std::string& rendered, std::string_view s);

class EnumBudgetError : public Error {
 public:
  EnumBudgetError() : Error("bit-vector enumeration exceeds budget") {}
};

/// Assignments to `subst_vars` (lexicographic, first variable most
/// significant) under which `fragment` is satisfiable. Throws EnumBudgetError
/// when |subst_vars| * width exceeds `budget_bits`.
std::vector<Assignment> enumerate_bv_assignments(const LinearBvSystem& fragment,
                                                 const std::vector<std::string>& subst_vars,
                                                 unsigned budget_bits = 20);
/// Serial reference of enumerate_bv_assignments.
std::vector<Assignment> enumerate_bv_assignments_serial(const LinearBvSystem& fragment,
                                                        const std::vector<std::string>& subst_vars,
                                                        unsigned budget_bits = 20);

struct ReducedFormula {
  unsigned width = 1;
  std::string alphabet;
  std::vector<WordEq> word_eqs;
  std::vector<WordDiseq> diseqs;
  /// (v_i, X_i) substitution pairs.
  std::vector<std::pair<std::string, std::string>> substitution;
  /// Bit-vector fragment over the substitution variables and user variables.
  LinearBvSystem fragment;
  /// Satisfying assignments of the substitution variables.
  std::vector<Assignment> assignments;
  /// One congruence map per assignment.
  std::vector<std::map<std::string, LengthCongruence>> disjuncts;

  /// Word equations and disequalities as one conjunction.
  Formula word_part() const;
  /// True when the integer lengths satisfy the congruences of some disjunct.
  bool lengths_admitted(const std::map<std::string, std::size_t>& lens) const;
};

/// Name of the substitution variable for string variable `x`.
std::string subst_var(const std::string& x);

ReducedFormula reduce_to_R(const Disjunct& d, const SolverConfig& cfg, unsigned budget_bits = 20);

/// Searches the reduced problem with the bounded oracle. Returns a model of
/// the word part whose lengths are admitted, completed with bit-vector values.
std::optional<Model> solve_reduced(const ReducedFormula& r, const SolverConfig& cfg, const OracleConfig& o,
                                   const std::vector<std::string>& string_vars);

/// Sat with a validated model, Unsat only when no bit-vector assignment
/// exists, Unknown(bound) when the oracle finds nothing within its bound.
SolverResult decide_via_reduction(const Disjunct& d, const SolverConfig& cfg, std::size_t oracle_bound,
                                  const Deadline& deadline = Deadline::never());

/// decide_via_reduction over the DNF of `assertions`.
SolverResult decide_formula_via_reduction(const std::vector<Formula>& assertions, const SolverConfig& cfg,
                                          std::size_t oracle_bound, const Deadline& deadline = Deadline::never());

/// Default oracle bound for the reduction path: 2 * 2^width + 4, capped at 32.
std::size_t default_reduction_bound(unsigned width);

}  // namespace strbv
