#include "strbv/frontend.hpp"

#include <charconv>
#include <sstream>

namespace strbv {

ParseError::ParseError(ParseErrorKind kind, int line, int col, const std::string& msg)
    : InputError(std::to_string(line) + ":" + std::to_string(col) + ": " + msg), kind_(kind), line_(line), col_(col) {}

namespace {

[[noreturn]] void fail(ParseErrorKind kind, const Sexpr& at, const std::string& msg) {
  throw ParseError(kind, at.line, at.col, msg);
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Sexpr> all() {
    std::vector<Sexpr> out;
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) break;
      out.push_back(read());
    }
    return out;
  }

 private:
  Sexpr read() {
    skip_space();
    Sexpr e;
    e.line = line_;
    e.col = col_;
    if (pos_ >= text_.size()) throw ParseError(ParseErrorKind::syntax, line_, col_, "unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      advance();
      e.kind = Sexpr::Kind::list;
      while (true) {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError(ParseErrorKind::syntax, e.line, e.col, "unbalanced '('");
        if (text_[pos_] == ')') {
          advance();
          break;
        }
        e.items.push_back(read());
      }
      return e;
    }
    if (c == ')') throw ParseError(ParseErrorKind::syntax, line_, col_, "unexpected ')'");
    if (c == '"') {
      advance();
      e.kind = Sexpr::Kind::string;
      while (true) {
        if (pos_ >= text_.size()) throw ParseError(ParseErrorKind::syntax, e.line, e.col, "unterminated string literal");
        char d = text_[pos_];
        advance();
        if (d == '"') {
          if (pos_ < text_.size() && text_[pos_] == '"') {
            e.text.push_back('"');
            advance();
            continue;
          }
          break;
        }
        e.text.push_back(d);
      }
      return e;
    }
    e.kind = Sexpr::Kind::symbol;
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (d == '(' || d == ')' || d == '"' || d == ';' || std::isspace(static_cast<unsigned char>(d))) break;
      e.text.push_back(d);
      advance();
    }
    return e;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

struct TypedTerm {
  Sort sort;
  StrTerm str;
  BvTerm bv;
};

bool parse_u64(std::string_view digits, int base, std::uint64_t& out) {
  if (digits.empty()) return false;
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out, base);
  return ec == std::errc() && p == digits.data() + digits.size();
}

bool is_bv_literal(const Sexpr& e) {
  if (e.kind == Sexpr::Kind::symbol) return e.text.rfind("#b", 0) == 0 || e.text.rfind("#x", 0) == 0;
  return e.kind == Sexpr::Kind::list && e.items.size() == 3 && e.items[0].is_symbol("_") &&
         e.items[1].kind == Sexpr::Kind::symbol && e.items[1].text.rfind("bv", 0) == 0;
}

TypedTerm parse_term(const Sexpr& e, const SymbolTable& syms, const SolverConfig& cfg);

StrTerm expect_str(const Sexpr& e, const SymbolTable& syms, const SolverConfig& cfg) {
  TypedTerm t = parse_term(e, syms, cfg);
  if (t.sort != Sort::string) fail(ParseErrorKind::sort_mismatch, e, "expected a String term");
  return t.str;
}

BvTerm expect_bv(const Sexpr& e, const SymbolTable& syms, const SolverConfig& cfg) {
  TypedTerm t = parse_term(e, syms, cfg);
  if (t.sort != Sort::bitvec) fail(ParseErrorKind::sort_mismatch, e, "expected a bit-vector term");
  return t.bv;
}

TypedTerm parse_term(const Sexpr& e, const SymbolTable& syms, const SolverConfig& cfg) {
  if (e.kind == Sexpr::Kind::string) {
    for (char c : e.text) {
      if (!cfg.in_alphabet(c)) fail(ParseErrorKind::alphabet, e, std::string("character '") + c + "' is not in the alphabet");
    }
    return {Sort::string, StrTerm::lit(e.text), {}};
  }
  if (is_bv_literal(e)) return {Sort::bitvec, {}, BvTerm::constant(parse_bv_literal(e, cfg))};
  if (e.kind == Sexpr::Kind::symbol) {
    auto sort = syms.lookup(e.text);
    if (!sort) fail(ParseErrorKind::unknown_symbol, e, "unknown symbol '" + e.text + "'");
    if (*sort == Sort::string) return {Sort::string, StrTerm::var(e.text), {}};
    return {Sort::bitvec, {}, BvTerm::var(e.text)};
  }
  if (e.items.empty() || e.items[0].kind != Sexpr::Kind::symbol) fail(ParseErrorKind::syntax, e, "malformed term");
  const std::string& head = e.items[0].text;
  const std::size_t argc = e.items.size() - 1;
  if (head == "str.++") {
    if (argc < 1) fail(ParseErrorKind::syntax, e, "str.++ needs arguments");
    std::vector<StrTerm> parts;
    for (std::size_t i = 1; i < e.items.size(); ++i) parts.push_back(expect_str(e.items[i], syms, cfg));
    return {Sort::string, StrTerm::concat(parts), {}};
  }
  if (head == "str.len_bv") {
    if (argc != 1) fail(ParseErrorKind::syntax, e, "str.len_bv takes one argument");
    return {Sort::bitvec, {}, BvTerm::strlen(expect_str(e.items[1], syms, cfg))};
  }
  if (head == "bvadd") {
    if (argc < 2) fail(ParseErrorKind::syntax, e, "bvadd needs two or more arguments");
    BvTerm acc = expect_bv(e.items[1], syms, cfg);
    for (std::size_t i = 2; i < e.items.size(); ++i) acc = BvTerm::add(acc, expect_bv(e.items[i], syms, cfg));
    return {Sort::bitvec, {}, acc};
  }
  if (head == "bvmul") {
    if (argc != 2) fail(ParseErrorKind::syntax, e, "bvmul takes two arguments");
    BvTerm a = expect_bv(e.items[1], syms, cfg);
    BvTerm b = expect_bv(e.items[2], syms, cfg);
    if (a.kind() == BvTerm::Kind::constant) return {Sort::bitvec, {}, BvTerm::mul(a.value(), b)};
    if (b.kind() == BvTerm::Kind::constant) return {Sort::bitvec, {}, BvTerm::mul(b.value(), a)};
    fail(ParseErrorKind::syntax, e, "bvmul needs a constant operand");
  }
  fail(ParseErrorKind::unknown_symbol, e.items[0], "unknown function '" + head + "'");
}

Formula pairwise(const Sexpr& e, const SymbolTable& syms, const SolverConfig& cfg, bool equal) {
  if (e.items.size() < 3) fail(ParseErrorKind::syntax, e, "comparison needs two or more arguments");
  std::vector<TypedTerm> args;
  for (std::size_t i = 1; i < e.items.size(); ++i) {
    args.push_back(parse_term(e.items[i], syms, cfg));
    if (args.back().sort != args.front().sort) fail(ParseErrorKind::sort_mismatch, e.items[i], "operands have different sorts");
  }
  auto make = [&](const TypedTerm& a, const TypedTerm& b) -> Formula {
    if (a.sort == Sort::string) {
      if (equal) return Formula::atom(WordEq{a.str, b.str});
      return Formula::atom(WordDiseq{a.str, b.str});
    }
    return Formula::atom(BvCmp{equal ? CmpOp::eq : CmpOp::ne, a.bv, b.bv});
  };
  std::vector<Formula> parts;
  if (equal) {
    for (std::size_t i = 0; i + 1 < args.size(); ++i) parts.push_back(make(args[i], args[i + 1]));
  } else {
    for (std::size_t i = 0; i < args.size(); ++i)
      for (std::size_t j = i + 1; j < args.size(); ++j) parts.push_back(make(args[i], args[j]));
  }
  if (parts.size() == 1) return parts.front();
  return Formula::conj(std::move(parts));
}

}  // namespace

std::vector<Sexpr> parse_sexprs(std::string_view text) { return Lexer(text).all(); }

void SymbolTable::declare(const std::string& name, Sort sort, const Sexpr& where) {
  if (sorts_.count(name)) fail(ParseErrorKind::syntax, where, "symbol '" + name + "' already declared");
  sorts_.emplace(name, sort);
  order_.emplace_back(name, sort);
}

std::optional<Sort> SymbolTable::lookup(const std::string& name) const {
  auto it = sorts_.find(name);
  if (it == sorts_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t parse_bv_literal(const Sexpr& e, const SolverConfig& cfg) {
  std::uint64_t value = 0;
  unsigned width = 0;
  if (e.kind == Sexpr::Kind::symbol) {
    std::string_view digits = std::string_view(e.text).substr(2);
    bool binary = e.text[1] == 'b';
    width = static_cast<unsigned>(digits.size() * (binary ? 1 : 4));
    if (width == 0 || width > 64 || !parse_u64(digits, binary ? 2 : 16, value))
      fail(ParseErrorKind::syntax, e, "malformed bit-vector literal '" + e.text + "'");
  } else {
    std::uint64_t w = 0;
    if (!parse_u64(std::string_view(e.items[1].text).substr(2), 10, value) || e.items[2].kind != Sexpr::Kind::symbol ||
        !parse_u64(e.items[2].text, 10, w) || w == 0 || w > 64)
      fail(ParseErrorKind::syntax, e, "malformed (_ bvN k) literal");
    width = static_cast<unsigned>(w);
    if (width < 64 && value >> width != 0) fail(ParseErrorKind::syntax, e, "literal value does not fit its width");
  }
  if (width != cfg.width)
    fail(ParseErrorKind::width_mismatch, e,
         "literal of width " + std::to_string(width) + " used at width " + std::to_string(cfg.width));
  return value;
}

StrTerm parse_str_term(const Sexpr& e, const SymbolTable& syms, const SolverConfig& cfg) {
  return expect_str(e, syms, cfg);
}

BvTerm parse_bv_term(const Sexpr& e, const SymbolTable& syms, const SolverConfig& cfg) {
  return expect_bv(e, syms, cfg);
}

Formula parse_formula(const Sexpr& e, const SymbolTable& syms, const SolverConfig& cfg) {
  if (e.is_symbol("true")) return Formula::conj({});
  if (e.is_symbol("false")) return Formula::disj({});
  if (e.kind != Sexpr::Kind::list || e.items.empty() || e.items[0].kind != Sexpr::Kind::symbol)
    fail(ParseErrorKind::sort_mismatch, e, "expected a Boolean formula");
  const std::string& head = e.items[0].text;
  if (head == "and" || head == "or") {
    std::vector<Formula> parts;
    for (std::size_t i = 1; i < e.items.size(); ++i) parts.push_back(parse_formula(e.items[i], syms, cfg));
    return head == "and" ? Formula::conj(std::move(parts)) : Formula::disj(std::move(parts));
  }
  if (head == "not") {
    if (e.items.size() != 2) fail(ParseErrorKind::syntax, e, "not takes one argument");
    return Formula::neg(parse_formula(e.items[1], syms, cfg));
  }
  if (head == "=") return pairwise(e, syms, cfg, true);
  if (head == "distinct") return pairwise(e, syms, cfg, false);
  static const std::map<std::string, CmpOp> cmps = {
      {"bvult", CmpOp::lt}, {"bvule", CmpOp::le}, {"bvugt", CmpOp::gt}, {"bvuge", CmpOp::ge}};
  if (auto it = cmps.find(head); it != cmps.end()) {
    if (e.items.size() != 3) fail(ParseErrorKind::syntax, e, head + " takes two arguments");
    return Formula::atom(BvCmp{it->second, expect_bv(e.items[1], syms, cfg), expect_bv(e.items[2], syms, cfg)});
  }
  fail(ParseErrorKind::unknown_symbol, e.items[0], "unknown predicate '" + head + "'");
}

Problem parse_script(std::string_view text, const SolverConfig& base) {
  Problem p;
  p.config = base;
  bool have_width = false;
  bool asserted = false;
  for (const Sexpr& cmd : parse_sexprs(text)) {
    if (cmd.kind != Sexpr::Kind::list || cmd.items.empty() || cmd.items[0].kind != Sexpr::Kind::symbol)
      fail(ParseErrorKind::syntax, cmd, "expected a command");
    const std::string& head = cmd.items[0].text;
    if (head == "set-option") {
      if (cmd.items.size() != 3) fail(ParseErrorKind::syntax, cmd, "set-option takes a keyword and a value");
      const Sexpr& key = cmd.items[1];
      const Sexpr& val = cmd.items[2];
      if (key.is_symbol(":strlen-width")) {
        std::uint64_t k = 0;
        if (val.kind != Sexpr::Kind::symbol || !parse_u64(val.text, 10, k) || k < 1 || k > 64)
          fail(ParseErrorKind::syntax, val, "strlen-width must be an integer in 1..64");
        if (have_width && k != p.config.width) fail(ParseErrorKind::width_mismatch, val, "strlen-width set twice");
        p.config.width = static_cast<unsigned>(k);
        have_width = true;
      } else if (key.is_symbol(":alphabet")) {
        if (val.kind != Sexpr::Kind::string) fail(ParseErrorKind::syntax, val, "alphabet must be a string literal");
        if (asserted) fail(ParseErrorKind::alphabet, val, "alphabet must be set before assertions");
        p.config.alphabet = val.text;
        try {
          p.config.validate();
        } catch (const InputError& err) {
          fail(ParseErrorKind::alphabet, val, err.what());
        }
      }
      // Other options are accepted and ignored.
    } else if (head == "set-logic" || head == "set-info" || head == "exit") {
      continue;
    } else if (head == "declare-const" || head == "declare-fun") {
      std::size_t sort_at = head == "declare-const" ? 2 : 3;
      if (cmd.items.size() != sort_at + 1 || cmd.items[1].kind != Sexpr::Kind::symbol)
        fail(ParseErrorKind::syntax, cmd, "malformed " + head);
      if (head == "declare-fun" && !(cmd.items[2].kind == Sexpr::Kind::list && cmd.items[2].items.empty()))
        fail(ParseErrorKind::syntax, cmd.items[2], "only nullary functions are supported");
      const Sexpr& sort = cmd.items[sort_at];
      if (sort.is_symbol("String")) {
        p.symbols.declare(cmd.items[1].text, Sort::string, cmd.items[1]);
      } else if (sort.kind == Sexpr::Kind::list && sort.items.size() == 3 && sort.items[0].is_symbol("_") &&
                 sort.items[1].is_symbol("BitVec")) {
        std::uint64_t k = 0;
        if (!parse_u64(sort.items[2].text, 10, k)) fail(ParseErrorKind::syntax, sort, "malformed BitVec sort");
        if (!have_width) fail(ParseErrorKind::missing_width, cmd, "(set-option :strlen-width k) must come first");
        if (k != p.config.width)
          fail(ParseErrorKind::width_mismatch, sort, "bit-vector width differs from strlen-width");
        p.symbols.declare(cmd.items[1].text, Sort::bitvec, cmd.items[1]);
      } else {
        fail(ParseErrorKind::sort_mismatch, sort, "unsupported sort");
      }
    } else if (head == "assert") {
      if (!have_width) fail(ParseErrorKind::missing_width, cmd, "(set-option :strlen-width k) must precede assertions");
      if (cmd.items.size() != 2) fail(ParseErrorKind::syntax, cmd, "assert takes one formula");
      p.assertions.push_back(parse_formula(cmd.items[1], p.symbols, p.config));
      asserted = true;
    } else if (head == "check-sat") {
      p.commands.push_back(Command::check_sat);
    } else if (head == "get-model") {
      p.commands.push_back(Command::get_model);
    } else {
      fail(ParseErrorKind::unknown_symbol, cmd.items[0], "unknown command '" + head + "'");
    }
  }
  if (!have_width) throw ParseError(ParseErrorKind::missing_width, 1, 1, "missing (set-option :strlen-width k)");
  return p;
}

// ---------------------------------------------------------------------------
// Printing

std::string quote_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string print_bv_literal(std::uint64_t value, unsigned width) {
  static const char* hex = "0123456789abcdef";
  std::string out;
  if (width % 4 == 0) {
    out = "#x";
    for (int i = static_cast<int>(width) / 4 - 1; i >= 0; --i) out.push_back(hex[(value >> (4 * i)) & 0xf]);
  } else {
    out = "#b";
    for (int i = static_cast<int>(width) - 1; i >= 0; --i) out.push_back(((value >> i) & 1) ? '1' : '0');
  }
  return out;
}

std::string print_term(const StrTerm& t) {
  switch (t.kind()) {
    case StrTerm::Kind::var: return t.text();
    case StrTerm::Kind::lit: return quote_string(t.text());
    case StrTerm::Kind::concat: return "(str.++ " + print_term(t.left()) + " " + print_term(t.right()) + ")";
  }
  return {};
}

std::string print_term(const BvTerm& t, unsigned width) {
  switch (t.kind()) {
    case BvTerm::Kind::var: return t.name();
    case BvTerm::Kind::constant: return print_bv_literal(t.value(), width);
    case BvTerm::Kind::strlen: return "(str.len_bv " + print_term(t.str()) + ")";
    case BvTerm::Kind::add: return "(bvadd " + print_term(t.left(), width) + " " + print_term(t.right(), width) + ")";
    case BvTerm::Kind::mul:
      return "(bvmul " + print_bv_literal(t.value(), width) + " " + print_term(t.left(), width) + ")";
  }
  return {};
}

std::string print_atom(const Atom& a, unsigned width) {
  return std::visit(
      [&](const auto& at) -> std::string {
        using T = std::decay_t<decltype(at)>;
        if constexpr (std::is_same_v<T, WordEq>) {
          return "(= " + print_term(at.lhs) + " " + print_term(at.rhs) + ")";
        } else if constexpr (std::is_same_v<T, WordDiseq>) {
          return "(distinct " + print_term(at.lhs) + " " + print_term(at.rhs) + ")";
        } else {
          return "(" + std::string(to_string(at.op)) + " " + print_term(at.lhs, width) + " " +
                 print_term(at.rhs, width) + ")";
        }
      },
      a);
}

std::string print_formula(const Formula& f, unsigned width) {
  switch (f.kind()) {
    case Formula::Kind::atom: return print_atom(f.as_atom(), width);
    case Formula::Kind::neg: return "(not " + print_formula(f.children().front(), width) + ")";
    case Formula::Kind::conj:
    case Formula::Kind::disj: {
      if (f.children().empty()) return f.kind() == Formula::Kind::conj ? "true" : "false";
      std::string out = f.kind() == Formula::Kind::conj ? "(and" : "(or";
      for (const auto& c : f.children()) out += " " + print_formula(c, width);
      return out + ")";
    }
  }
  return {};
}

std::string print_script(const Problem& p) {
  std::ostringstream os;
  os << "(set-option :strlen-width " << p.config.width << ")\n";
  os << "(set-option :alphabet " << quote_string(p.config.alphabet) << ")\n";
  for (const auto& [name, sort] : p.symbols.declarations()) {
    if (sort == Sort::string) os << "(declare-const " << name << " String)\n";
    else os << "(declare-const " << name << " (_ BitVec " << p.config.width << "))\n";
  }
  for (const auto& f : p.assertions) os << "(assert " << print_formula(f, p.config.width) << ")\n";
  for (Command c : p.commands) os << (c == Command::check_sat ? "(check-sat)\n" : "(get-model)\n");
  return os.str();
}

std::string print_model(const Model& m, unsigned width) {
  std::ostringstream os;
  for (const auto& [name, value] : m.strings) os << "(define-fun " << name << " () String " << quote_string(value) << ")\n";
  for (const auto& [name, value] : m.bitvecs)
    os << "(define-fun " << name << " () (_ BitVec " << width << ") " << print_bv_literal(value, width) << ")\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// DNF

void Disjunct::add(Atom a) {
  std::visit(
      [&](const auto& at) {
        using T = std::decay_t<decltype(at)>;
        if constexpr (std::is_same_v<T, WordEq>) word_eqs.push_back(at);
        else if constexpr (std::is_same_v<T, WordDiseq>) word_diseqs.push_back(at);
        else bv_atoms.push_back(at);
      },
      a);
  atoms.push_back(std::move(a));
}

Formula Disjunct::as_formula() const {
  std::vector<Formula> parts;
  parts.reserve(atoms.size());
  for (const auto& a : atoms) parts.push_back(Formula::atom(a));
  return Formula::conj(std::move(parts));
}

Atom negate(const Atom& a) {
  return std::visit(
      [](const auto& at) -> Atom {
        using T = std::decay_t<decltype(at)>;
        if constexpr (std::is_same_v<T, WordEq>) return WordDiseq{at.lhs, at.rhs};
        else if constexpr (std::is_same_v<T, WordDiseq>) return WordEq{at.lhs, at.rhs};
        else return BvCmp{negate(at.op), at.lhs, at.rhs};
      },
      a);
}

namespace {

using Clause = std::vector<Atom>;

std::vector<Clause> dnf_of(const Formula& f, bool positive, int budget) {
  switch (f.kind()) {
    case Formula::Kind::atom: return {Clause{positive ? f.as_atom() : negate(f.as_atom())}};
    case Formula::Kind::neg: return dnf_of(f.children().front(), !positive, budget);
    case Formula::Kind::conj:
    case Formula::Kind::disj: {
      // De Morgan: a negated conjunction distributes like a disjunction.
      bool as_and = (f.kind() == Formula::Kind::conj) == positive;
      if (!as_and) {
        std::vector<Clause> out;
        for (const auto& c : f.children()) {
          auto sub = dnf_of(c, positive, budget);
          out.insert(out.end(), sub.begin(), sub.end());
          if (static_cast<int>(out.size()) > budget) throw DnfBudgetError();
        }
        return out;
      }
      std::vector<Clause> acc{Clause{}};
      for (const auto& c : f.children()) {
        auto sub = dnf_of(c, positive, budget);
        if (acc.size() * sub.size() > static_cast<std::size_t>(budget)) throw DnfBudgetError();
        std::vector<Clause> next;
        next.reserve(acc.size() * sub.size());
        for (const auto& a : acc) {
          for (const auto& b : sub) {
            Clause merged = a;
            merged.insert(merged.end(), b.begin(), b.end());
            next.push_back(std::move(merged));
          }
        }
        acc = std::move(next);
      }
      return acc;
    }
  }
  return {};
}

}  // namespace

std::vector<Disjunct> to_dnf(const std::vector<Formula>& assertions, int max_dnf) {
  auto clauses = dnf_of(Formula::conj(assertions), true, max_dnf);
  std::vector<Disjunct> out;
  out.reserve(clauses.size());
  for (auto& c : clauses) {
    Disjunct d;
    for (auto& a : c) d.add(std::move(a));
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace strbv
