#include "strbv/libsum.hpp"

#include <algorithm>
#include <cctype>

namespace strbv {

TraceError::TraceError(int line, const std::string& msg)
    : InputError("line " + std::to_string(line) + ": " + msg), line_(line) {}

void SsaState::define(const std::string& name, VarKind kind, int line) {
  if (defined(name)) throw TraceError(line, "'" + name + "' is assigned more than once");
  kinds.emplace(name, kind);
  order.push_back(name);
}

SymbolTable SsaState::symbols() const {
  SymbolTable t;
  for (const auto& v : order) t.declare(v, kinds.at(v) == VarKind::str ? Sort::string : Sort::bitvec, Sexpr{});
  return t;
}

std::string_view to_string(SummaryFn fn) {
  switch (fn) {
    case SummaryFn::strlen: return "strlen";
    case SummaryFn::strcpy: return "strcpy";
    case SummaryFn::strcat: return "strcat";
    case SummaryFn::alloc: return "alloc";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Wraparound side conditions

namespace {

void collect_pieces(const StrTerm& t, std::vector<StrTerm>& out) {
  if (t.kind() == StrTerm::Kind::concat) {
    collect_pieces(t.left(), out);
    collect_pieces(t.right(), out);
  } else {
    out.push_back(t);
  }
}

void no_wrap_into(const BvTerm& t, std::uint64_t mask, std::vector<Atom>& out) {
  switch (t.kind()) {
    case BvTerm::Kind::add:
      no_wrap_into(t.left(), mask, out);
      no_wrap_into(t.right(), mask, out);
      out.push_back(BvCmp{CmpOp::ge, t, t.left()});
      break;
    case BvTerm::Kind::mul:
      no_wrap_into(t.left(), mask, out);
      if (t.value() >= 2) out.push_back(BvCmp{CmpOp::le, t.left(), BvTerm::constant(mask / t.value())});
      break;
    case BvTerm::Kind::strlen: {
      std::vector<StrTerm> pieces;
      collect_pieces(t.str(), pieces);
      for (std::size_t i = 2; i <= pieces.size(); ++i) {
        std::vector<StrTerm> longer(pieces.begin(), pieces.begin() + static_cast<std::ptrdiff_t>(i));
        std::vector<StrTerm> shorter(pieces.begin(), pieces.begin() + static_cast<std::ptrdiff_t>(i - 1));
        out.push_back(BvCmp{CmpOp::ge, BvTerm::strlen(StrTerm::concat(longer)),
                            BvTerm::strlen(StrTerm::concat(shorter))});
      }
      break;
    }
    default: break;
  }
}

const StrTerm& str_arg(const std::vector<SummaryArg>& args, std::size_t i, SummaryFn fn) {
  const auto* s = std::get_if<StrTerm>(&args[i]);
  if (!s) throw InputError(std::string(to_string(fn)) + ": argument " + std::to_string(i + 1) + " must be a string");
  return *s;
}

void expect_arity(const std::vector<SummaryArg>& args, std::size_t n, SummaryFn fn) {
  if (args.size() != n)
    throw InputError(std::string(to_string(fn)) + " takes " + std::to_string(n) + " argument(s)");
}

std::vector<SummaryTemplate> make_templates() {
  std::vector<SummaryTemplate> ts;
  ts.push_back({SummaryFn::strlen, [](const std::string& r, const std::vector<SummaryArg>& args, SsaState& st,
                                      const EmitOptions& o) {
                  expect_arity(args, 1, SummaryFn::strlen);
                  BvTerm len = BvTerm::strlen(str_arg(args, 0, SummaryFn::strlen));
                  st.define(r, VarKind::bv);
                  std::vector<Atom> out{BvCmp{CmpOp::eq, BvTerm::var(r), len}};
                  if (o.no_wrap) no_wrap_into(len, o.mask, out);
                  return out;
                }});
  ts.push_back({SummaryFn::strcpy, [](const std::string& r, const std::vector<SummaryArg>& args, SsaState& st,
                                      const EmitOptions&) {
                  expect_arity(args, 1, SummaryFn::strcpy);
                  StrTerm src = str_arg(args, 0, SummaryFn::strcpy);
                  st.define(r, VarKind::str);
                  return std::vector<Atom>{WordEq{StrTerm::var(r), src}};
                }});
  ts.push_back({SummaryFn::strcat, [](const std::string& r, const std::vector<SummaryArg>& args, SsaState& st,
                                      const EmitOptions& o) {
                  expect_arity(args, 2, SummaryFn::strcat);
                  StrTerm joined =
                      StrTerm::concat(str_arg(args, 0, SummaryFn::strcat), str_arg(args, 1, SummaryFn::strcat));
                  st.define(r, VarKind::str);
                  std::vector<Atom> out{WordEq{StrTerm::var(r), joined}};
                  if (o.no_wrap) no_wrap_into(BvTerm::strlen(joined), o.mask, out);
                  return out;
                }});
  ts.push_back({SummaryFn::alloc, [](const std::string& r, const std::vector<SummaryArg>& args, SsaState& st,
                                     const EmitOptions& o) {
                  expect_arity(args, 1, SummaryFn::alloc);
                  const auto* e = std::get_if<BvTerm>(&args[0]);
                  if (!e) throw InputError("alloc: argument 1 must be a bit-vector");
                  st.define(r, VarKind::cap);
                  std::vector<Atom> out{BvCmp{CmpOp::eq, BvTerm::var(r), *e}};
                  if (o.no_wrap) no_wrap_into(*e, o.mask, out);
                  return out;
                }});
  return ts;
}

}  // namespace

std::vector<Atom> no_wrap_atoms(const BvTerm& t, std::uint64_t mask) {
  std::vector<Atom> out;
  no_wrap_into(t, mask, out);
  return out;
}

const SummaryTemplate& summary_template(SummaryFn fn) {
  static const std::vector<SummaryTemplate> templates = make_templates();
  return templates.at(static_cast<std::size_t>(fn));
}

std::pair<std::vector<Atom>, SsaState> expand_summary(const SummaryTemplate& t, const std::string& result,
                                                      const std::vector<SummaryArg>& args, const SsaState& state,
                                                      const EmitOptions& opts) {
  SsaState next = state;
  std::vector<Atom> atoms = t.emit(result, args, next, opts);
  return {std::move(atoms), std::move(next)};
}

// ---------------------------------------------------------------------------
// Trace parsing

SolverConfig TraceProgram::config(const SolverConfig& base) const {
  SolverConfig c = base;
  c.width = width;
  c.alphabet = alphabet;
  c.validate();
  return c;
}

namespace {

std::string strip_comment(const std::string& line) {
  bool in_str = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (c == '"') in_str = !in_str;
    if (in_str || c != '#') continue;
    bool before = i == 0 || std::isspace(static_cast<unsigned char>(line[i - 1]));
    bool after = i + 1 == line.size() || std::isspace(static_cast<unsigned char>(line[i + 1]));
    if (before && after) return line.substr(0, i);
  }
  return line;
}

std::vector<std::string> split_statements(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool in_str = false;
  int depth = 0;
  for (char c : line) {
    if (c == '"') in_str = !in_str;
    if (!in_str) {
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (c == ';' && depth == 0) {
        out.push_back(cur);
        cur.clear();
        continue;
      }
    }
    cur.push_back(c);
  }
  out.push_back(cur);
  return out;
}

Sexpr rename_concat(Sexpr e) {
  if (e.is_symbol("concat")) e.text = "str.++";
  for (auto& i : e.items) i = rename_concat(std::move(i));
  return e;
}

class TraceParser {
 public:
  TraceProgram run(std::string_view text) {
    std::size_t start = 0;
    int line_no = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      ++line_no;
      std::string line = strip_comment(std::string(text.substr(start, end - start)));
      for (const auto& piece : split_statements(line)) statement(piece, line_no);
      start = end + 1;
    }
    return std::move(p_);
  }

 private:
  TraceProgram p_;
  SsaState state_;
  bool started_ = false;
  int line_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw TraceError(line_, msg); }

  SolverConfig cfg() const {
    SolverConfig c;
    c.width = p_.width;
    c.alphabet = p_.alphabet;
    return c;
  }

  const std::string& name(const Sexpr& e) const {
    if (e.kind != Sexpr::Kind::symbol) fail("expected a variable name");
    return e.text;
  }

  StrTerm str(const Sexpr& e) const { return parse_str_term(rename_concat(e), state_.symbols(), cfg()); }
  BvTerm bv(const Sexpr& e) const { return parse_bv_term(rename_concat(e), state_.symbols(), cfg()); }

  std::uint64_t number(const Sexpr& e) const {
    if (e.kind == Sexpr::Kind::symbol && !e.text.empty() &&
        std::all_of(e.text.begin(), e.text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      std::uint64_t v = std::stoull(e.text);
      if (v > cfg().mask()) fail("constant " + e.text + " does not fit the width");
      return v;
    }
    return parse_bv_literal(e, cfg());
  }

  void define(Statement st, VarKind kind) {
    state_.define(st.target, kind, line_);
    p_.statements.push_back(std::move(st));
  }

  void statement(const std::string& text, int line_no) {
    line_ = line_no;
    std::vector<Sexpr> toks;
    try {
      toks = parse_sexprs(text);
    } catch (const ParseError& e) {
      fail(e.what());
    }
    if (toks.empty()) return;
    const Sexpr& head = toks[0];
    if (head.kind != Sexpr::Kind::symbol) fail("statement must start with a keyword");
    try {
      dispatch(head.text, toks);
    } catch (const TraceError&) {
      throw;
    } catch (const InputError& e) {
      fail(e.what());
    }
  }

  void dispatch(const std::string& kw, const std::vector<Sexpr>& t) {
    Statement st;
    st.line = line_;
    if (kw == "width" || kw == "alphabet") {
      if (started_) fail(kw + " must precede all other statements");
      if (t.size() != 2) fail(kw + " takes one value");
      if (kw == "width") {
        if (t[1].kind != Sexpr::Kind::symbol) fail("width must be a number");
        p_.width = static_cast<unsigned>(std::stoul(t[1].text));
      } else {
        if (t[1].kind != Sexpr::Kind::string) fail("alphabet must be a string literal");
        p_.alphabet = t[1].text;
      }
      cfg().validate();
      return;
    }
    started_ = true;
    if (kw == "assume") {
      if (t.size() != 2) fail("assume takes one formula");
      st.kind = Statement::Kind::assume;
      st.condition = parse_formula(rename_concat(t[1]), state_.symbols(), cfg());
      p_.statements.push_back(std::move(st));
      return;
    }
    if (kw == "assert_overflow") {
      if (t.size() != 3) fail("assert_overflow takes a capacity and a content term");
      st.kind = Statement::Kind::assert_overflow;
      st.target = name(t[1]);
      auto k = state_.kinds.find(st.target);
      if (k == state_.kinds.end() || k->second == VarKind::str) fail("'" + st.target + "' is not a capacity");
      st.strs = {str(t[2])};
      p_.statements.push_back(std::move(st));
      return;
    }
    if (kw != "str" && kw != "bv" && kw != "cap") fail("unknown statement '" + kw + "'");
    if (t.size() < 2) fail(kw + " needs a variable name");
    st.target = name(t[1]);
    if (t.size() == 2) {
      if (kw == "cap") fail("cap must be defined with alloc");
      st.kind = kw == "str" ? Statement::Kind::decl_str : Statement::Kind::decl_bv;
      define(std::move(st), kw == "str" ? VarKind::str : VarKind::bv);
      return;
    }
    if (!t[2].is_symbol(":=") || t.size() < 4) fail("expected ':=' and a right-hand side");
    const Sexpr& fn = t[3];
    const std::size_t argc = t.size() - 4;
    auto arg = [&](std::size_t i) -> const Sexpr& { return t[4 + i]; };
    if (kw == "str") {
      st.kind = Statement::Kind::str_define;
      if (fn.is_symbol("strcpy") && argc == 1) st.strs = {str(arg(0))};
      else if (fn.is_symbol("strcat") && argc == 2) st.strs = {str(arg(0)), str(arg(1))};
      else fail("str definitions use 'strcpy s' or 'strcat d s'");
      define(std::move(st), VarKind::str);
      return;
    }
    if (kw == "cap") {
      if (!fn.is_symbol("alloc") || argc != 1) fail("cap definitions use 'alloc e'");
      st.kind = Statement::Kind::alloc;
      st.bvs = {bv(arg(0))};
      define(std::move(st), VarKind::cap);
      return;
    }
    st.kind = Statement::Kind::bv_define;
    if (fn.is_symbol("strlen")) {
      if (argc != 1) fail("strlen takes one string");
      st.op = Statement::Op::strlen;
      st.strs = {str(arg(0))};
    } else if (fn.is_symbol("add")) {
      if (argc < 2) fail("add takes at least two terms");
      st.op = Statement::Op::add;
      for (std::size_t i = 0; i < argc; ++i) st.bvs.push_back(bv(arg(i)));
    } else if (fn.is_symbol("mul")) {
      if (argc != 2) fail("mul takes a constant and a term");
      st.op = Statement::Op::mul;
      st.coeff = number(arg(0));
      st.bvs = {bv(arg(1))};
    } else if (fn.is_symbol("udiv")) {
      if (argc != 2) fail("udiv takes a term and a constant");
      st.op = Statement::Op::udiv;
      st.bvs = {bv(arg(0))};
      st.coeff = number(arg(1));
      if (st.coeff == 0) fail("division by zero");
      if (state_.defined(st.target + "_rem")) fail("'" + st.target + "_rem' is already defined");
    } else {
      if (argc != 0) fail("expected a single bit-vector term");
      st.op = Statement::Op::term;
      st.bvs = {bv(fn)};
    }
    std::string target = st.target;
    bool div = st.op == Statement::Op::udiv;
    define(std::move(st), VarKind::bv);
    if (div) state_.define(target + "_rem", VarKind::bv, line_);
  }
};

void require_defined(const FreeVars& fv, const SsaState& st, int line) {
  for (const auto& v : fv.strings)
    if (!st.defined(v) || st.kinds.at(v) != VarKind::str) throw TraceError(line, "undefined string variable '" + v + "'");
  for (const auto& v : fv.bitvecs)
    if (!st.defined(v) || st.kinds.at(v) == VarKind::str) throw TraceError(line, "undefined bit-vector variable '" + v + "'");
}

FreeVars statement_uses(const Statement& s) {
  FreeVars fv;
  for (const auto& t : s.strs) collect_vars(t, fv);
  for (const auto& t : s.bvs) collect_vars(t, fv);
  if (s.condition) {
    FreeVars c = free_vars(*s.condition);
    fv.strings.insert(fv.strings.end(), c.strings.begin(), c.strings.end());
    fv.bitvecs.insert(fv.bitvecs.end(), c.bitvecs.begin(), c.bitvecs.end());
  }
  if (s.kind == Statement::Kind::assert_overflow) fv.bitvecs.push_back(s.target);
  return fv;
}

BvTerm sum(const std::vector<BvTerm>& ts) {
  BvTerm acc = ts.front();
  for (std::size_t i = 1; i < ts.size(); ++i) acc = BvTerm::add(acc, ts[i]);
  return acc;
}

}  // namespace

TraceProgram parse_trace(std::string_view text) { return TraceParser().run(text); }

void check_ssa(const TraceProgram& p) {
  SsaState st;
  for (const auto& s : p.statements) {
    require_defined(statement_uses(s), st, s.line);
    switch (s.kind) {
      case Statement::Kind::decl_str:
      case Statement::Kind::str_define: st.define(s.target, VarKind::str, s.line); break;
      case Statement::Kind::decl_bv: st.define(s.target, VarKind::bv, s.line); break;
      case Statement::Kind::bv_define:
        st.define(s.target, VarKind::bv, s.line);
        if (s.op == Statement::Op::udiv) st.define(s.target + "_rem", VarKind::bv, s.line);
        break;
      case Statement::Kind::alloc: st.define(s.target, VarKind::cap, s.line); break;
      default: break;
    }
  }
}

Formula encode_snippet(const TraceProgram& p, const EmitOptions& options) {
  check_ssa(p);
  EmitOptions opts = options;
  opts.mask = p.config().mask();
  SsaState st;
  std::vector<Formula> parts;
  auto emit = [&](const std::vector<Atom>& atoms) {
    for (const auto& a : atoms) parts.push_back(Formula::atom(a));
  };
  auto expand = [&](SummaryFn fn, const std::string& r, const std::vector<SummaryArg>& args) {
    auto [atoms, next] = expand_summary(summary_template(fn), r, args, st, opts);
    emit(atoms);
    st = std::move(next);
  };
  for (const auto& s : p.statements) {
    switch (s.kind) {
      case Statement::Kind::decl_str: st.define(s.target, VarKind::str, s.line); break;
      case Statement::Kind::decl_bv: st.define(s.target, VarKind::bv, s.line); break;
      case Statement::Kind::str_define:
        if (s.strs.size() == 1) expand(SummaryFn::strcpy, s.target, {s.strs[0]});
        else expand(SummaryFn::strcat, s.target, {s.strs[0], s.strs[1]});
        break;
      case Statement::Kind::alloc: expand(SummaryFn::alloc, s.target, {s.bvs[0]}); break;
      case Statement::Kind::bv_define: {
        if (s.op == Statement::Op::strlen) {
          expand(SummaryFn::strlen, s.target, {s.strs[0]});
          break;
        }
        const BvTerm v = BvTerm::var(s.target);
        if (s.op == Statement::Op::udiv) {
          // e = c*q + r with r < c and no wraparound, so q = e / c exactly.
          const BvTerm r = BvTerm::var(s.target + "_rem");
          const BvTerm cq = BvTerm::mul(s.coeff, v);
          const BvTerm total = BvTerm::add(cq, r);
          emit({BvCmp{CmpOp::eq, s.bvs[0], total}, BvCmp{CmpOp::lt, r, BvTerm::constant(s.coeff)},
                BvCmp{CmpOp::le, v, BvTerm::constant(opts.mask / s.coeff)}, BvCmp{CmpOp::ge, total, cq}});
          if (opts.no_wrap) emit(no_wrap_atoms(s.bvs[0], opts.mask));
          st.define(s.target, VarKind::bv, s.line);
          st.define(s.target + "_rem", VarKind::bv, s.line);
          break;
        }
        BvTerm rhs = s.op == Statement::Op::add   ? sum(s.bvs)
                     : s.op == Statement::Op::mul ? BvTerm::mul(s.coeff, s.bvs[0])
                                                  : s.bvs[0];
        emit({BvCmp{CmpOp::eq, v, rhs}});
        if (opts.no_wrap) emit(no_wrap_atoms(rhs, opts.mask));
        st.define(s.target, VarKind::bv, s.line);
        break;
      }
      case Statement::Kind::assume: parts.push_back(*s.condition); break;
      case Statement::Kind::assert_overflow: {
        const BvTerm len = BvTerm::strlen(s.strs[0]);
        emit({BvCmp{CmpOp::gt, len, BvTerm::var(s.target)}});
        if (opts.no_wrap) emit(no_wrap_atoms(len, opts.mask));
        break;
      }
    }
  }
  return Formula::conj(std::move(parts));
}

Problem trace_problem(const TraceProgram& p, const SolverConfig& base, const EmitOptions& opts) {
  Problem out;
  out.config = p.config(base);
  check_ssa(p);
  Formula f = encode_snippet(p, opts);
  SsaState st;
  for (const auto& s : p.statements) {
    if (s.kind == Statement::Kind::assume || s.kind == Statement::Kind::assert_overflow) continue;
    st.define(s.target, s.kind == Statement::Kind::decl_str || s.kind == Statement::Kind::str_define ? VarKind::str
                                                                                                      : VarKind::bv);
    if (s.op == Statement::Op::udiv && s.kind == Statement::Kind::bv_define)
      st.define(s.target + "_rem", VarKind::bv);
  }
  out.symbols = st.symbols();
  out.assertions = {f};
  out.commands = {Command::check_sat};
  return out;
}

}  // namespace strbv
