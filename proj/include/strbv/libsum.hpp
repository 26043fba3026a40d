#pragma once

// Constraint summaries for C string functions and a straight-line trace
// language that compiles program snippets to string/bit-vector formulas.

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "strbv/core.hpp"
#include "strbv/frontend.hpp"

namespace strbv {

class TraceError : public InputError {
 public:
  TraceError(int line, const std::string& msg);
  int line() const { return line_; }

 private:
  int line_;
};

enum class VarKind { str, bv, cap };

/// Variables defined so far, in definition order.
struct SsaState {
  std::map<std::string, VarKind> kinds;
  std::vector<std::string> order;

  bool defined(const std::string& name) const { return kinds.count(name) != 0; }
  /// Throws TraceError when `name` is already defined.
  void define(const std::string& name, VarKind kind, int line = 0);
  SymbolTable symbols() const;
};

enum class SummaryFn { strlen, strcpy, strcat, alloc };
std::string_view to_string(SummaryFn fn);

using SummaryArg = std::variant<StrTerm, BvTerm>;

struct EmitOptions {
  /// Adds constraints excluding wraparound of every sum and product emitted.
  bool no_wrap = false;
  /// Width mask for the side conditions; encode_snippet sets it from the program.
  std::uint64_t mask = 0xffff;
};

struct SummaryTemplate {
  SummaryFn fn;
  std::function<std::vector<Atom>(const std::string& result, const std::vector<SummaryArg>& args,
                                  SsaState& state, const EmitOptions& opts)>
      emit;
};

const SummaryTemplate& summary_template(SummaryFn fn);

/// Emits the constraints of `fn` applied to `args`, defining `result` in the
/// returned state. Throws InputError on arity or sort mismatch.
std::pair<std::vector<Atom>, SsaState> expand_summary(const SummaryTemplate& t, const std::string& result,
                                                      const std::vector<SummaryArg>& args, const SsaState& state,
                                                      const EmitOptions& opts = {});

/// Atoms stating that evaluating `t` involves no unsigned wraparound.
std::vector<Atom> no_wrap_atoms(const BvTerm& t, std::uint64_t mask);

struct Statement {
  enum class Kind { decl_str, decl_bv, bv_define, str_define, alloc, assume, assert_overflow };
  /// Right-hand side shape of bv_define.
  enum class Op { term, strlen, add, mul, udiv };

  Kind kind = Kind::assume;
  Op op = Op::term;
  std::string target;
  std::vector<StrTerm> strs;
  std::vector<BvTerm> bvs;
  std::uint64_t coeff = 0;
  std::optional<Formula> condition;
  int line = 0;
};

struct TraceProgram {
  unsigned width = 16;
  std::string alphabet = "abcdefghijklmnopqrstuvwxyz";
  std::vector<Statement> statements;

  SolverConfig config(const SolverConfig& base = {}) const;
};

/// One statement per line or `;`-separated; `#` followed by whitespace or at
/// the start of a line begins a comment.
TraceProgram parse_trace(std::string_view text);

/// Throws TraceError for redefinitions and uses of undefined variables.
void check_ssa(const TraceProgram& p);

/// Conjunction of all emitted atoms, assumptions and overflow queries.
Formula encode_snippet(const TraceProgram& p, const EmitOptions& opts = {});

/// encode_snippet packaged as a problem with a check-sat command.
Problem trace_problem(const TraceProgram& p, const SolverConfig& base = {}, const EmitOptions& opts = {});

}  // namespace strbv
