#pragma once

// Linear fixed-width unsigned bit-vector constraints over length variables,
// plus the length search that fixes concrete values one variable at a time.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "strbv/core.hpp"

namespace strbv {

using Assignment = std::map<std::string, std::uint64_t>;

/// sum(coeffs[v] * v) + constant, modulo 2^width.
struct LinTerm {
  std::map<std::string, std::uint64_t> coeffs;
  std::uint64_t constant = 0;

  static LinTerm of_var(const std::string& name);
  static LinTerm of_constant(std::uint64_t c);
  bool is_constant() const { return coeffs.empty(); }
  friend bool operator==(const LinTerm&, const LinTerm&) = default;
};

LinTerm lin_add(const LinTerm& a, const LinTerm& b, std::uint64_t mask);
LinTerm lin_sub(const LinTerm& a, const LinTerm& b, std::uint64_t mask);
LinTerm lin_scale(const LinTerm& a, std::uint64_t c, std::uint64_t mask);
std::uint64_t lin_eval(const LinTerm& t, const Assignment& a, std::uint64_t mask);

/// Rewrites a bit-vector term; str.len_bv of a string variable X becomes the
/// variable `len_name(X)`, and of a literal its wrapped length.
LinTerm linearize(const BvTerm& t, std::uint64_t mask, const std::function<std::string(const std::string&)>& len_name);

/// sum(coeffs[v] * v) == constant (mod 2^width).
struct LinEq {
  std::map<std::string, std::uint64_t> coeffs;
  std::uint64_t constant = 0;
};

struct LinCmp {
  CmpOp op;
  LinTerm lhs, rhs;
};

class LinearBvSystem {
 public:
  explicit LinearBvSystem(unsigned width = 8);

  unsigned width() const { return width_; }
  std::uint64_t mask() const { return mask_; }
  const std::vector<std::string>& vars() const { return vars_; }
  const std::vector<LinEq>& eqs() const { return eqs_; }
  const std::vector<LinCmp>& cmps() const { return cmps_; }

  /// Registers a variable (no-op if present); order of first registration is kept.
  void add_var(const std::string& name);
  bool has_var(const std::string& name) const;
  /// Adds lhs == rhs as an equation; an `eq` comparison is stored the same way.
  void add_eq(const LinTerm& lhs, const LinTerm& rhs);
  void add_cmp(CmpOp op, const LinTerm& lhs, const LinTerm& rhs);
  /// Appends the constraints and variables of `other` (same width).
  void append(const LinearBvSystem& other);

  bool satisfied_by(const Assignment& a) const;
  /// Whether `name` occurs with a nonzero coefficient in any constraint.
  bool mentions(const std::string& name) const;
  std::string describe() const;

 private:
  void register_term(const LinTerm& t);

  unsigned width_;
  std::uint64_t mask_;
  std::vector<std::string> vars_;
  std::vector<LinEq> eqs_;
  std::vector<LinCmp> cmps_;
};

struct BvCheck {
  bool sat = false;
  Assignment assignment;
};

/// Decides the system by modular elimination followed by interval
/// branch-and-bound. Throws TimeoutError when `deadline` expires.
BvCheck check_bv_sat(const LinearBvSystem& sys, const Deadline& deadline = Deadline::never());

/// Exhaustive reference: tries assignments in lexicographic order (first
/// variable most significant). Requires width <= 12 and at most 4 variables.
BvCheck check_bv_sat_exhaustive(const LinearBvSystem& sys);

std::uint64_t mod_inverse(std::uint64_t odd, std::uint64_t mask);

// ---------------------------------------------------------------------------
// Length search

struct SearchState {
  std::string var;
  std::uint64_t lo = 0, hi = 0;
  std::vector<std::uint64_t> trace;

  bool live() const { return lo <= hi; }
};

struct Candidate {
  std::uint64_t value;
  SearchState state;
};

SearchState initial_search(const std::string& var, const LinearBvSystem& sys);
/// binary: floor((lo + hi) / 2); linear: lo. Records the candidate in the trace.
std::optional<Candidate> next_length_candidate(SearchState st, Strategy strategy);
/// Narrows the interval after candidate `c` was rejected by `sys`.
SearchState refute_candidate(SearchState st, std::uint64_t c, const LinearBvSystem& sys, Strategy strategy,
                             const Deadline& deadline = Deadline::never());

struct LengthSolution {
  /// timeout keeps the guesses made before the deadline passed.
  enum class Status { sat, unsat, budget, timeout };
  Status status = Status::unsat;
  Assignment values;
  std::uint64_t guesses = 0;
  /// One entry per searched variable, in fixing order.
  std::vector<SearchState> traces;
};

/// Fixes variables in system order. Variables determined by earlier choices
/// are propagated without a guess; variables that occur in no constraint take
/// `hints[v]` (default 0) without a guess.
LengthSolution solve_lengths(const LinearBvSystem& sys, Strategy strategy, const Deadline& deadline = Deadline::never(),
                             const Assignment& hints = {}, std::uint64_t max_guesses = ~std::uint64_t{0});

}  // namespace strbv
