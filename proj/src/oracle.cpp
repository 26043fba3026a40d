#include "strbv/oracle.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <omp.h>

#include "strbv/frontend.hpp"
#include "strbv/reduce.hpp"
#include "strbv/strsolve.hpp"

namespace strbv {

namespace {

struct Scope {
  std::vector<std::string> strs, bvs;
};

Scope scope_of(const Formula& f, const std::vector<std::string>& extra) {
  FreeVars fv = free_vars(f);
  Scope s{fv.strings, fv.bitvecs};
  for (const auto& x : extra)
    if (std::find(s.strs.begin(), s.strs.end(), x) == s.strs.end()) s.strs.push_back(x);
  return s;
}

void check_slice(const OracleConfig& o, const SolverConfig& cfg) {
  if (o.alphabet_slice.empty()) throw InputError("oracle alphabet slice is empty");
  for (char c : o.alphabet_slice)
    if (!cfg.in_alphabet(c)) throw InputError("oracle alphabet slice is not a subset of the alphabet");
}

// Tuples of `n` lengths in [0, max_len] summing to `total`, lexicographically.
void tuples_with_sum(std::size_t n, std::size_t max_len, std::size_t total, std::vector<std::size_t>& cur,
                     std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() + 1 == n) {
    if (total <= max_len) {
      cur.push_back(total);
      out.push_back(cur);
      cur.pop_back();
    }
    return;
  }
  for (std::size_t v = 0; v <= std::min(max_len, total); ++v) {
    if (total - v > (n - cur.size() - 1) * max_len) continue;
    cur.push_back(v);
    tuples_with_sum(n, max_len, total - v, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<std::size_t>> level(std::size_t n, std::size_t max_len, std::size_t total) {
  std::vector<std::vector<std::size_t>> out;
  if (n == 0) {
    if (total == 0) out.emplace_back();
    return out;
  }
  std::vector<std::size_t> cur;
  tuples_with_sum(n, max_len, total, cur, out);
  return out;
}

std::uint64_t bv_space(const Scope& s, const SolverConfig& cfg, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < s.bvs.size(); ++i) {
    if (cfg.width >= 32 || total > cap >> cfg.width) throw CapExceeded();
    total <<= cfg.width;
  }
  return total;
}

// Tries every bit-vector valuation for a fixed string assignment.
bool try_bitvecs(const Formula& f, const Scope& s, const SolverConfig& cfg, Model& m, std::uint64_t space,
                 std::uint64_t& checked, std::uint64_t limit) {
  const std::uint64_t base = cfg.mask() + 1;
  for (std::uint64_t code = 0; code < space; ++code) {
    if (++checked > limit) throw CapExceeded();
    std::uint64_t rest = code;
    for (std::size_t i = s.bvs.size(); i-- > 0;) {
      m.bitvecs[s.bvs[i]] = rest % base;
      rest /= base;
    }
    if (eval_formula(f, m, cfg)) return true;
  }
  return false;
}

enum class Tri { no, yes, maybe };

Tri tri_not(Tri t) { return t == Tri::yes ? Tri::no : t == Tri::no ? Tri::yes : Tri::maybe; }

class TupleContext {
 public:
  TupleContext(const Formula& f, const Scope& s, const OracleConfig& o, const SolverConfig& cfg)
      : f_(f), s_(s), o_(o), cfg_(cfg), space_(bv_space(s, cfg, o.cap)) {
    for (std::size_t i = 0; i < s.strs.size(); ++i) index_[s.strs[i]] = i;
    collect_top(f);
    collect_word_vars(f);
  }

  std::uint64_t space() const { return space_; }

  // Three-valued truth of `f` knowing only the lengths.
  Tri tri(const Formula& f, const std::vector<std::size_t>& lens) const {
    switch (f.kind()) {
      case Formula::Kind::atom: return tri_atom(f.as_atom(), lens);
      case Formula::Kind::neg: return tri_not(tri(f.children().front(), lens));
      case Formula::Kind::conj:
      case Formula::Kind::disj: {
        bool is_conj = f.kind() == Formula::Kind::conj;
        Tri acc = is_conj ? Tri::yes : Tri::no;
        for (const auto& c : f.children()) {
          Tri t = tri(c, lens);
          if (is_conj && t == Tri::no) return Tri::no;
          if (!is_conj && t == Tri::yes) return Tri::yes;
          if (t == Tri::maybe) acc = Tri::maybe;
        }
        return acc;
      }
    }
    return Tri::maybe;
  }

  struct Outcome {
    bool sat = false;
    Model model;
    std::uint64_t checked = 0;
    bool cap = false;
    bool timeout = false;
  };

  Outcome run(const std::vector<std::size_t>& lens, std::uint64_t limit, const Deadline& dl) const {
    Outcome out;
    try {
      out.sat = search(lens, limit, dl, out.model, out.checked);
    } catch (const CapExceeded&) {
      out.cap = true;
    } catch (const TimeoutError&) {
      out.timeout = true;
    }
    return out;
  }

 private:
  void collect_top(const Formula& f) {
    if (f.kind() == Formula::Kind::conj) {
      for (const auto& c : f.children()) collect_top(c);
    } else if (f.kind() == Formula::Kind::atom) {
      if (const auto* eq = std::get_if<WordEq>(&f.as_atom())) top_eqs_.push_back({flatten(eq->lhs), flatten(eq->rhs)});
    }
  }

  void collect_word_vars(const Formula& f) {
    if (f.kind() != Formula::Kind::atom) {
      for (const auto& c : f.children()) collect_word_vars(c);
      return;
    }
    const Atom& a = f.as_atom();
    if (std::holds_alternative<BvCmp>(a)) return;
    FreeVars fv;
    collect_vars(a, fv);
    for (const auto& x : fv.strings) word_vars_.insert(x);
  }

  std::size_t word_length(const Word& w, const std::vector<std::size_t>& lens) const {
    std::size_t n = 0;
    for (const Leaf& l : w) n += l.is_var ? lens[index_.at(l.text)] : l.text.size();
    return n;
  }

  static bool constant_word(const Word& w) {
    return std::none_of(w.begin(), w.end(), [](const Leaf& l) { return l.is_var; });
  }

  Tri tri_atom(const Atom& a, const std::vector<std::size_t>& lens) const {
    if (const auto* cmp = std::get_if<BvCmp>(&a)) {
      FreeVars fv;
      collect_vars(a, fv);
      if (!fv.bitvecs.empty()) return Tri::maybe;
      Model m;
      for (const auto& x : fv.strings) m.strings[x] = std::string(lens[index_.at(x)], o_.alphabet_slice.front());
      return compare(cmp->op, bv_eval(cmp->lhs, m, cfg_), bv_eval(cmp->rhs, m, cfg_)) ? Tri::yes : Tri::no;
    }
    bool is_eq = std::holds_alternative<WordEq>(a);
    const StrTerm& lhs = is_eq ? std::get<WordEq>(a).lhs : std::get<WordDiseq>(a).lhs;
    const StrTerm& rhs = is_eq ? std::get<WordEq>(a).rhs : std::get<WordDiseq>(a).rhs;
    Word l = flatten(lhs), r = flatten(rhs);
    Tri eq = Tri::maybe;
    if (word_length(l, lens) != word_length(r, lens)) eq = Tri::no;
    else if (constant_word(l) && constant_word(r)) eq = l == r ? Tri::yes : Tri::no;
    return is_eq ? eq : tri_not(eq);
  }

  struct Sym {
    std::size_t pos;  // valid when c == 0
    char c;
  };

  std::vector<Sym> symbols(const Word& w, const std::vector<std::size_t>& offsets,
                           const std::vector<std::size_t>& lens) const {
    std::vector<Sym> out;
    for (const Leaf& l : w) {
      if (l.is_var) {
        std::size_t i = index_.at(l.text);
        for (std::size_t p = 0; p < lens[i]; ++p) out.push_back({offsets[i] + p, 0});
      } else {
        for (char ch : l.text) out.push_back({0, ch});
      }
    }
    return out;
  }

  bool search(const std::vector<std::size_t>& lens, std::uint64_t limit, const Deadline& dl, Model& model,
              std::uint64_t& checked) const {
    const std::size_t n = s_.strs.size();
    std::vector<std::size_t> offsets(n, 0);
    std::size_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      offsets[i] = total;
      total += lens[i];
    }
    std::vector<std::size_t> parent(total);
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<char> fixed(total, 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    auto fix = [&](std::size_t p, char c) {
      std::size_t r = find(p);
      if (fixed[r] && fixed[r] != c) return false;
      fixed[r] = c;
      return true;
    };
    for (const auto& [lw, rw] : top_eqs_) {
      auto ls = symbols(lw, offsets, lens), rs = symbols(rw, offsets, lens);
      if (ls.size() != rs.size()) return false;
      for (std::size_t j = 0; j < ls.size(); ++j) {
        const Sym &a = ls[j], &b = rs[j];
        if (a.c && b.c) {
          if (a.c != b.c) return false;
        } else if (a.c) {
          if (!fix(b.pos, a.c)) return false;
        } else if (b.c) {
          if (!fix(a.pos, b.c)) return false;
        } else {
          std::size_t ra = find(a.pos), rb = find(b.pos);
          if (ra == rb) continue;
          if (fixed[ra] && fixed[rb] && fixed[ra] != fixed[rb]) return false;
          if (ra > rb) std::swap(ra, rb);
          parent[rb] = ra;
          if (!fixed[ra]) fixed[ra] = fixed[rb];
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (word_vars_.count(s_.strs[i])) continue;
      for (std::size_t p = 0; p < lens[i]; ++p)
        if (!fix(offsets[i] + p, o_.alphabet_slice.front())) return false;
    }
    std::vector<std::size_t> free_roots;
    for (std::size_t p = 0; p < total; ++p) {
      std::size_t r = find(p);
      if (fixed[r]) {
        if (o_.alphabet_slice.find(fixed[r]) == std::string::npos) return false;
      } else if (r == p) {
        free_roots.push_back(p);  // roots are the minimal positions of their classes
      }
    }
    std::vector<std::size_t> digit(free_roots.size(), 0);
    std::vector<char> value(total);
    while (true) {
      if ((checked & 1023) == 0) dl.check();
      for (std::size_t j = 0; j < free_roots.size(); ++j) fixed[free_roots[j]] = o_.alphabet_slice[digit[j]];
      for (std::size_t p = 0; p < total; ++p) value[p] = fixed[find(p)];
      for (std::size_t j = 0; j < free_roots.size(); ++j) fixed[free_roots[j]] = 0;
      for (std::size_t i = 0; i < n; ++i)
        model.strings[s_.strs[i]] = std::string(value.begin() + offsets[i], value.begin() + offsets[i] + lens[i]);
      if (try_bitvecs(f_, s_, cfg_, model, space_, checked, limit)) return true;
      std::size_t j = digit.size();
      while (j > 0) {
        --j;
        if (++digit[j] < o_.alphabet_slice.size()) break;
        digit[j] = 0;
        if (j == 0) return false;
      }
      if (digit.empty()) return false;
    }
  }

  const Formula& f_;
  const Scope& s_;
  const OracleConfig& o_;
  const SolverConfig& cfg_;
  std::uint64_t space_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::pair<Word, Word>> top_eqs_;
  std::set<std::string> word_vars_;
};

Model finish_model(Model m, const Scope& s) {
  Model out;
  for (const auto& x : s.strs) out.strings[x] = m.strings[x];
  for (const auto& v : s.bvs) out.bitvecs[v] = m.bitvecs[v];
  return out;
}

}  // namespace

OracleResult brute_force_sat(const Formula& f, const OracleConfig& o, const SolverConfig& cfg,
                             const LengthFilter& filter, const std::vector<std::string>& extra_string_vars) {
  check_slice(o, cfg);
  const Scope s = scope_of(f, extra_string_vars);
  const TupleContext ctx(f, s, o, cfg);
  const Deadline dl(o.per_check_timeout_ms);
  OracleResult res;
  const std::size_t n = s.strs.size();
  const int threads = omp_in_parallel() ? 1 : omp_get_max_threads();
  const std::size_t chunk = static_cast<std::size_t>(threads) * 4;

  for (std::size_t total = 0; total <= n * o.max_len; ++total) {
    std::vector<std::vector<std::size_t>> candidates;
    for (auto& lens : level(n, o.max_len, total)) {
      if (filter && !filter(s.strs, lens)) continue;
      if (ctx.tri(f, lens) == Tri::no) continue;
      candidates.push_back(std::move(lens));
    }
    for (std::size_t start = 0; start < candidates.size(); start += chunk) {
      dl.check();
      const std::size_t end = std::min(candidates.size(), start + chunk);
      const std::uint64_t limit = o.cap - std::min(o.cap, res.checked);
      std::vector<TupleContext::Outcome> outcomes(end - start);
#pragma omp parallel for schedule(dynamic) if (threads > 1)
      for (std::size_t i = start; i < end; ++i) outcomes[i - start] = ctx.run(candidates[i], limit, dl);
      for (auto& oc : outcomes) {
        res.checked += oc.checked;
        if (oc.cap || res.checked > o.cap) throw CapExceeded();
        if (oc.timeout) throw TimeoutError();
        if (oc.sat) {
          res.sat = true;
          res.model = finish_model(std::move(oc.model), s);
          return res;
        }
      }
    }
  }
  return res;
}

OracleResult brute_force_sat_naive(const Formula& f, const OracleConfig& o, const SolverConfig& cfg,
                                   const LengthFilter& filter, const std::vector<std::string>& extra_string_vars) {
  check_slice(o, cfg);
  const Scope s = scope_of(f, extra_string_vars);
  const std::uint64_t space = bv_space(s, cfg, o.cap);
  const Deadline dl(o.per_check_timeout_ms);
  const std::size_t n = s.strs.size();
  const std::size_t a = o.alphabet_slice.size();
  OracleResult res;
  Model m;
  for (std::size_t total = 0; total <= n * o.max_len; ++total) {
    for (const auto& lens : level(n, o.max_len, total)) {
      if (filter && !filter(s.strs, lens)) continue;
      std::vector<std::size_t> digit(total, 0);
      while (true) {
        dl.check();
        std::size_t p = 0;
        for (std::size_t i = 0; i < n; ++i) {
          std::string v;
          for (std::size_t q = 0; q < lens[i]; ++q) v.push_back(o.alphabet_slice[digit[p++]]);
          m.strings[s.strs[i]] = v;
        }
        if (try_bitvecs(f, s, cfg, m, space, res.checked, o.cap)) {
          res.sat = true;
          res.model = finish_model(m, s);
          return res;
        }
        std::size_t j = digit.size();
        bool done = digit.empty();
        while (j > 0) {
          --j;
          if (++digit[j] < a) break;
          digit[j] = 0;
          if (j == 0) done = true;
        }
        if (done) break;
      }
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Random formulas

void GenParams::validate() const {
  if (n_str_vars < 1 || n_str_vars > 3) throw InputError("n_str_vars must be in 1..3");
  if (n_eqs < 0 || n_eqs > 2) throw InputError("n_eqs must be in 0..2");
  if (n_bv_atoms < 0 || n_bv_atoms > 3) throw InputError("n_bv_atoms must be in 0..3");
  if (width < 1 || width > 3) throw InputError("width must be in 1..3");
}

namespace {

class Generator {
 public:
  explicit Generator(const GenParams& p) : p_(p), rng_(p.seed) {}

  Formula formula() {
    std::vector<Formula> atoms;
    for (int i = 0; i < p_.n_eqs; ++i) atoms.push_back(Formula::atom(WordEq{term(), term()}));
    if (p_.allow_diseq && coin(2)) atoms.push_back(Formula::atom(WordDiseq{term(), term()}));
    for (int i = 0; i < p_.n_bv_atoms; ++i) atoms.push_back(Formula::atom(bv_atom()));
    if (atoms.empty()) atoms.push_back(Formula::atom(WordEq{var(), var()}));
    if (!p_.allow_boolean) return Formula::conj(std::move(atoms));
    return tree(atoms, 0, atoms.size());
  }

 private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin(std::size_t n) { return pick(n) == 0; }

  StrTerm var() {
    static const char* names[] = {"X", "Y", "Z"};
    return StrTerm::var(names[pick(static_cast<std::size_t>(p_.n_str_vars))]);
  }

  StrTerm literal() {
    std::string s;
    std::size_t len = 1 + pick(2);
    for (std::size_t i = 0; i < len; ++i) s.push_back("ab"[pick(2)]);
    return StrTerm::lit(s);
  }

  StrTerm term() {
    std::size_t n = 1 + pick(3);
    std::vector<StrTerm> parts;
    for (std::size_t i = 0; i < n; ++i) parts.push_back(pick(5) < 3 ? var() : literal());
    return StrTerm::concat(parts);
  }

  BvTerm length_term() {
    StrTerm s = var();
    if (coin(3)) s = StrTerm::concat(s, coin(2) ? var() : literal());
    BvTerm t = BvTerm::strlen(s);
    const std::uint64_t mask = (std::uint64_t{1} << p_.width) - 1;
    if (p_.allow_bv_var && coin(3)) t = BvTerm::add(t, BvTerm::var("n"));
    else if (coin(4)) t = BvTerm::add(t, BvTerm::constant(pick(mask + 1)));
    return t;
  }

  BvCmp bv_atom() {
    static const CmpOp ops[] = {CmpOp::eq, CmpOp::ne, CmpOp::lt, CmpOp::le, CmpOp::gt, CmpOp::ge};
    CmpOp op = ops[pick(6)];
    BvTerm lhs = length_term();
    const std::uint64_t mask = (std::uint64_t{1} << p_.width) - 1;
    BvTerm rhs = coin(4) ? BvTerm::strlen(var()) : BvTerm::constant(pick(mask + 1));
    return BvCmp{op, lhs, rhs};
  }

  Formula tree(const std::vector<Formula>& atoms, std::size_t lo, std::size_t hi) {
    Formula f = atoms[lo];
    if (hi - lo > 1) {
      std::size_t mid = lo + 1 + pick(hi - lo - 1);
      std::vector<Formula> kids{tree(atoms, lo, mid), tree(atoms, mid, hi)};
      f = coin(2) ? Formula::conj(std::move(kids)) : Formula::disj(std::move(kids));
    }
    if (coin(4)) f = Formula::neg(f);
    return f;
  }

  const GenParams& p_;
  std::mt19937_64 rng_;
};

bool model_ok(const SolverResult& r, const Formula& f, const SolverConfig& cfg) {
  if (r.status != Status::sat) return true;
  if (!r.model) return false;
  try {
    return eval_formula(f, *r.model, cfg);
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

Formula random_formula(const GenParams& p) {
  p.validate();
  return Generator(p).formula();
}

std::string Report::summary() const {
  std::map<std::string, int> counts;
  for (const auto& c : cases) {
    counts["solve." + std::string(to_string(c.solve))]++;
    counts["reduce." + std::string(to_string(c.reduce))]++;
    counts["oracle." + std::string(to_string(c.oracle))]++;
  }
  std::ostringstream os;
  os << "cases " << cases.size() << " violations " << violations << "\n";
  for (const auto& [k, v] : counts) os << "  " << k << " " << v << "\n";
  for (const auto& c : cases)
    if (!c.violation.empty()) os << "  seed " << c.seed << ": " << c.violation << "  " << c.formula << "\n";
  return os.str();
}

Report differential_run(int n, const GenParams& p, const OracleConfig& o, int solver_timeout_ms) {
  Report report;
  report.cases.resize(static_cast<std::size_t>(std::max(n, 0)));
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    CaseRecord& rec = report.cases[static_cast<std::size_t>(i)];
    GenParams q = p;
    q.seed = p.seed + static_cast<std::uint64_t>(i);
    rec.seed = q.seed;
    try {
      Formula f = random_formula(q);
      SolverConfig cfg;
      cfg.alphabet = "ab";
      cfg.width = q.width;
      rec.formula = print_formula(f, cfg.width);

      SolverResult solved = solve_formula({f}, cfg, Deadline(solver_timeout_ms));
      SolverResult reduced = decide_formula_via_reduction({f}, cfg, o.max_len, Deadline(solver_timeout_ms));
      rec.solve = solved.status;
      rec.reduce = reduced.status;
      try {
        rec.oracle = brute_force_sat(f, o, cfg).sat ? Status::sat : Status::unsat;
      } catch (const CapExceeded&) {
        rec.oracle = Status::unknown;
      } catch (const TimeoutError&) {
        rec.oracle = Status::timeout;
      }

      std::vector<std::string> bad;
      if (!model_ok(solved, f, cfg)) bad.push_back("solver model invalid");
      if (!model_ok(reduced, f, cfg)) bad.push_back("reduction model invalid");
      if (rec.solve == Status::unsat && rec.oracle == Status::sat) bad.push_back("solver unsat, oracle sat");
      if (rec.reduce == Status::unsat && rec.oracle == Status::sat) bad.push_back("reduction unsat, oracle sat");
      if ((rec.solve == Status::sat && rec.reduce == Status::unsat) ||
          (rec.solve == Status::unsat && rec.reduce == Status::sat))
        bad.push_back("solver and reduction disagree");
      for (std::size_t j = 0; j < bad.size(); ++j) rec.violation += (j ? "; " : "") + bad[j];
    } catch (const std::exception& e) {
      rec.violation = std::string("exception: ") + e.what();
    }
  }
  for (const auto& c : report.cases)
    if (!c.violation.empty()) ++report.violations;
  return report;
}

}  // namespace strbv
