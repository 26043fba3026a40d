#pragma once

// SMT-LIB2-style input subset: parsing, canonical printing and DNF expansion.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "strbv/core.hpp"

namespace strbv {

enum class ParseErrorKind { syntax, unknown_symbol, sort_mismatch, width_mismatch, missing_width, alphabet };

class ParseError : public InputError {
 public:
  ParseError(ParseErrorKind kind, int line, int col, const std::string& msg);
  ParseErrorKind kind() const { return kind_; }
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  ParseErrorKind kind_;
  int line_, col_;
};

struct Sexpr {
  enum class Kind { symbol, string, list };
  Kind kind = Kind::symbol;
  std::string text;
  std::vector<Sexpr> items;
  int line = 1, col = 1;

  bool is_symbol(std::string_view s) const { return kind == Kind::symbol && text == s; }
};

/// Tokenizes and groups `text`; `;` starts a comment that runs to end of line.
std::vector<Sexpr> parse_sexprs(std::string_view text);

enum class Sort { string, bitvec };

/// Declared variables and their sorts.
class SymbolTable {
 public:
  void declare(const std::string& name, Sort sort, const Sexpr& where);
  std::optional<Sort> lookup(const std::string& name) const;
  const std::vector<std::pair<std::string, Sort>>& declarations() const { return order_; }

 private:
  std::map<std::string, Sort> sorts_;
  std::vector<std::pair<std::string, Sort>> order_;
};

StrTerm parse_str_term(const Sexpr& e, const SymbolTable& syms, const SolverConfig& cfg);
BvTerm parse_bv_term(const Sexpr& e, const SymbolTable& syms, const SolverConfig& cfg);
Formula parse_formula(const Sexpr& e, const SymbolTable& syms, const SolverConfig& cfg);
/// Parses "#b..", "#x.." or "(_ bvN k)"; the literal's width must equal cfg.width.
std::uint64_t parse_bv_literal(const Sexpr& e, const SolverConfig& cfg);

enum class Command { check_sat, get_model };

struct Problem {
  SolverConfig config;
  SymbolTable symbols;
  std::vector<Formula> assertions;
  std::vector<Command> commands;

  Formula conjunction() const { return Formula::conj(assertions); }
};

/// `base` supplies strategy and budgets; width and alphabet come from the script.
Problem parse_script(std::string_view text, const SolverConfig& base = {});

std::string quote_string(std::string_view s);
std::string print_bv_literal(std::uint64_t value, unsigned width);
std::string print_term(const StrTerm& t);
std::string print_term(const BvTerm& t, unsigned width);
std::string print_atom(const Atom& a, unsigned width);
std::string print_formula(const Formula& f, unsigned width);
/// Canonical script: options, declarations, assertions, commands.
std::string print_script(const Problem& p);
/// One define-fun line per variable, strings before bit-vectors.
std::string print_model(const Model& m, unsigned width);

// ---------------------------------------------------------------------------
// DNF

class DnfBudgetError : public Error {
 public:
  DnfBudgetError() : Error("DNF expansion exceeds budget") {}
};

struct Disjunct {
  std::vector<WordEq> word_eqs;
  std::vector<WordDiseq> word_diseqs;
  std::vector<BvCmp> bv_atoms;
  /// Atoms in their original order, for variable-order decisions.
  std::vector<Atom> atoms;

  void add(Atom a);
  Formula as_formula() const;
  std::size_t size() const { return atoms.size(); }
};

/// Negations are pushed onto atoms: not(s = t) becomes s != t, and a negated
/// bit-vector comparison becomes its unsigned complement.
std::vector<Disjunct> to_dnf(const std::vector<Formula>& assertions, int max_dnf);
Atom negate(const Atom& a);

}  // namespace strbv
