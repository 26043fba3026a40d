#pragma once

// Terms, formulas and the reference semantics of word equations combined
// with fixed-width bit-vector string lengths.

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace strbv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad characters, sorts, widths or syntax.
class InputError : public Error {
 public:
  using Error::Error;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

class TimeoutError : public Error {
 public:
  TimeoutError() : Error("timeout") {}
};

/// A solver produced something its own checks reject (e.g. an invalid model).
class InternalError : public Error {
 public:
  using Error::Error;
};

enum class Strategy { binary, linear };

struct Budgets {
  int max_depth = 24;
  int max_dnf = 4096;
  /// 0 selects the default cap of 3 * 2^width + 16 characters.
  std::uint64_t max_model_len = 0;
  int timeout_ms = 20000;
  int max_diseq_flips = 256;
};

struct SolverConfig {
  std::string alphabet = "abcdefghijklmnopqrstuvwxyz";
  unsigned width = 8;
  Strategy strategy = Strategy::binary;
  Budgets budgets;

  /// Throws InputError when the alphabet, width or budgets are out of range.
  void validate() const;
  std::uint64_t mask() const;
  std::uint64_t wrap(std::uint64_t v) const { return v & mask(); }
  bool in_alphabet(char c) const;
  std::uint64_t model_len_cap() const;
};

std::string_view to_string(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view s);

// ---------------------------------------------------------------------------
// Terms

class StrTerm {
 public:
  enum class Kind { var, lit, concat };

  StrTerm();
  static StrTerm var(std::string name);
  static StrTerm lit(std::string text);
  static StrTerm concat(StrTerm left, StrTerm right);
  /// Left-nested concatenation of one or more terms.
  static StrTerm concat(const std::vector<StrTerm>& parts);

  Kind kind() const;
  /// Variable name or literal text.
  const std::string& text() const;
  const StrTerm& left() const;
  const StrTerm& right() const;

  friend bool operator==(const StrTerm& a, const StrTerm& b);

 private:
  struct Node;
  explicit StrTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

class BvTerm {
 public:
  enum class Kind { var, constant, strlen, add, mul };

  BvTerm();
  static BvTerm var(std::string name);
  static BvTerm constant(std::uint64_t value);
  static BvTerm strlen(StrTerm arg);
  static BvTerm add(BvTerm left, BvTerm right);
  static BvTerm mul(std::uint64_t coeff, BvTerm arg);

  Kind kind() const;
  const std::string& name() const;
  /// Constant value or multiplication coefficient.
  std::uint64_t value() const;
  const StrTerm& str() const;
  const BvTerm& left() const;
  const BvTerm& right() const;

  friend bool operator==(const BvTerm& a, const BvTerm& b);

 private:
  struct Node;
  explicit BvTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

enum class CmpOp { eq, ne, lt, le, gt, ge };

/// The comparison that holds exactly when `op` does not.
CmpOp negate(CmpOp op);
/// The comparison with its operands swapped (a < b  <=>  b > a).
CmpOp mirror(CmpOp op);
bool compare(CmpOp op, std::uint64_t a, std::uint64_t b);
std::string_view to_string(CmpOp op);

struct WordEq {
  StrTerm lhs, rhs;
  friend bool operator==(const WordEq&, const WordEq&) = default;
};
struct WordDiseq {
  StrTerm lhs, rhs;
  friend bool operator==(const WordDiseq&, const WordDiseq&) = default;
};
struct BvCmp {
  CmpOp op;
  BvTerm lhs, rhs;
  friend bool operator==(const BvCmp&, const BvCmp&) = default;
};
using Atom = std::variant<WordEq, WordDiseq, BvCmp>;

class Formula {
 public:
  enum class Kind { atom, conj, disj, neg };

  static Formula atom(Atom a);
  static Formula conj(std::vector<Formula> parts);
  static Formula disj(std::vector<Formula> parts);
  static Formula neg(Formula f);

  Kind kind() const;
  const Atom& as_atom() const;
  const std::vector<Formula>& children() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Flattened words

struct Leaf {
  bool is_var = false;
  std::string text;
  friend bool operator==(const Leaf&, const Leaf&) = default;
  friend auto operator<=>(const Leaf&, const Leaf&) = default;
};
using Word = std::vector<Leaf>;

Leaf var_leaf(std::string name);
Leaf lit_leaf(std::string text);
/// Flattens concatenation, drops empty literals and merges adjacent literals.
Word flatten(const StrTerm& t);
/// Rebuilds a left-nested term; the empty word becomes the literal "".
StrTerm to_term(const Word& w);
/// Merges adjacent literals and drops empty ones.
Word normalized(Word w);

// ---------------------------------------------------------------------------
// Models and results

struct Model {
  std::map<std::string, std::string> strings;
  std::map<std::string, std::uint64_t> bitvecs;
  friend bool operator==(const Model&, const Model&) = default;
};

enum class Status { sat, unsat, unknown, timeout };
enum class UnknownReason { none, overlap, diseq_budget, dnf_budget, model_len, bound, enum_budget };

struct SolverResult {
  Status status = Status::unknown;
  std::optional<Model> model;
  UnknownReason reason = UnknownReason::none;

  static SolverResult sat(Model m) { return {Status::sat, std::move(m), UnknownReason::none}; }
  static SolverResult unsat() { return {Status::unsat, std::nullopt, UnknownReason::none}; }
  static SolverResult unknown(UnknownReason r) { return {Status::unknown, std::nullopt, r}; }
  static SolverResult timeout() { return {Status::timeout, std::nullopt, UnknownReason::none}; }
};

std::string_view to_string(Status s);
std::string_view to_string(UnknownReason r);

// ---------------------------------------------------------------------------
// Semantics

/// Integer length of `s` reduced modulo 2^width. Throws InputError for
/// characters outside the alphabet.
std::uint64_t strlen_bv_of(std::string_view s, const SolverConfig& cfg);

std::string eval_str(const StrTerm& t, const Model& m);
std::uint64_t bv_eval(const BvTerm& t, const Model& m, const SolverConfig& cfg);
bool eval_atom(const Atom& a, const Model& m, const SolverConfig& cfg);
bool eval_formula(const Formula& f, const Model& m, const SolverConfig& cfg);

struct FreeVars {
  /// First-occurrence order.
  std::vector<std::string> strings;
  std::vector<std::string> bitvecs;
};
FreeVars free_vars(const Formula& f);
void collect_vars(const StrTerm& t, FreeVars& out);
void collect_vars(const BvTerm& t, FreeVars& out);
void collect_vars(const Atom& a, FreeVars& out);

/// Keeps only the variables of `vars`; missing ones are not added.
Model restrict_to(const Model& m, const FreeVars& vars);
/// `m` extended with "" for missing strings and 0 for missing bit-vectors of `vars`.
Model complete_model(Model m, const FreeVars& vars);

// ---------------------------------------------------------------------------

class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  explicit Deadline(int timeout_ms);
  static Deadline never();

  bool expired() const;
  /// Throws TimeoutError once expired.
  void check() const;
  int remaining_ms() const;

 private:
  Deadline() = default;
  std::optional<Clock::time_point> at_;
};

}  // namespace strbv
