#include "strbv/reduce.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include <omp.h>

namespace strbv {

std::uint64_t LengthCongruence::modulus() const {
  if (width >= 64) throw InputError("modulus 2^64 is not representable");
  return std::uint64_t{1} << width;
}

bool LengthCongruence::contains_length(std::uint64_t len) const {
  std::uint64_t mask = width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
  return (len & mask) == residue;
}

LengthCongruence length_congruence_of(std::uint64_t c, unsigned width, const std::string& alphabet) {
  if (width < 1 || width > 64) throw InputError("width must be in 1..64");
  if (width < 64 && c >> width != 0) throw InputError("constant does not fit the width");
  return LengthCongruence{c, width, alphabet};
}

bool congruence_contains(std::string_view s, const LengthCongruence& l) { return l.contains_length(s.size()); }

std::string regex_render(const LengthCongruence& l) {
  if (l.alphabet.empty()) throw InputError("empty alphabet");
  std::string cls = std::string("[") + l.alphabet.front() + "-" + l.alphabet.back() + "]";
  return "(" + cls + "^" + std::to_string(l.modulus()) + ")*" + cls + "^" + std::to_string(l.residue);
}

RenderedRegex::RenderedRegex(const std::string& rendered) {
  static const std::regex power(R"(\^(\d+))");
  re_ = std::regex(std::regex_replace(rendered, power, "{$1}"), std::regex::ECMAScript | std::regex::optimize);
}

bool RenderedRegex::matches(std::string_view s) const { return std::regex_match(s.begin(), s.end(), re_); }

bool regex_matches(const std::string& rendered, std::string_view s) { return RenderedRegex(rendered).matches(s); }

// ---------------------------------------------------------------------------
// Enumeration of length assignments

namespace {

struct Enumeration {
  const LinearBvSystem& fragment;
  const std::vector<std::string>& subst;
  bool has_other_vars;
  std::uint64_t total;

  Enumeration(const LinearBvSystem& f, const std::vector<std::string>& s, unsigned budget_bits)
      : fragment(f), subst(s), has_other_vars(false), total(1) {
    if (s.size() * f.width() > budget_bits) throw EnumBudgetError();
    total = std::uint64_t{1} << (s.size() * f.width());
    for (const auto& v : f.vars())
      if (std::find(s.begin(), s.end(), v) == s.end()) has_other_vars = true;
  }

  Assignment decode(std::uint64_t code) const {
    Assignment a;
    const std::uint64_t mask = fragment.mask();
    for (std::size_t i = subst.size(); i-- > 0;) {
      a[subst[i]] = code & mask;
      code >>= fragment.width();
    }
    return a;
  }

  bool admits(const Assignment& a) const {
    if (!has_other_vars) {
      Assignment full = a;
      for (const auto& v : fragment.vars()) full.emplace(v, 0);
      return fragment.satisfied_by(full);
    }
    LinearBvSystem pinned = fragment;
    for (const auto& [v, x] : a) pinned.add_eq(LinTerm::of_var(v), LinTerm::of_constant(x));
    return check_bv_sat(pinned).sat;
  }
};

}  // namespace

std::vector<Assignment> enumerate_bv_assignments(const LinearBvSystem& fragment,
                                                 const std::vector<std::string>& subst_vars, unsigned budget_bits) {
  const Enumeration e(fragment, subst_vars, budget_bits);
  std::vector<char> ok(e.total, 0);
  const auto total = static_cast<std::int64_t>(e.total);
#pragma omp parallel for schedule(static)
  for (std::int64_t code = 0; code < total; ++code)
    ok[static_cast<std::size_t>(code)] = e.admits(e.decode(static_cast<std::uint64_t>(code)));
  std::vector<Assignment> out;
  for (std::uint64_t code = 0; code < e.total; ++code)
    if (ok[code]) out.push_back(e.decode(code));
  return out;
}

std::vector<Assignment> enumerate_bv_assignments_serial(const LinearBvSystem& fragment,
                                                        const std::vector<std::string>& subst_vars,
                                                        unsigned budget_bits) {
  const Enumeration e(fragment, subst_vars, budget_bits);
  std::vector<Assignment> out;
  for (std::uint64_t code = 0; code < e.total; ++code) {
    Assignment a = e.decode(code);
    if (e.admits(a)) out.push_back(std::move(a));
  }
  return out;
}

// ---------------------------------------------------------------------------
// R(phi)

std::string subst_var(const std::string& x) { return "v_" + x; }

Formula ReducedFormula::word_part() const {
  std::vector<Formula> parts;
  for (const auto& e : word_eqs) parts.push_back(Formula::atom(e));
  for (const auto& e : diseqs) parts.push_back(Formula::atom(e));
  return Formula::conj(std::move(parts));
}

bool ReducedFormula::lengths_admitted(const std::map<std::string, std::size_t>& lens) const {
  for (const auto& d : disjuncts) {
    bool all = true;
    for (const auto& [x, l] : d) {
      auto it = lens.find(x);
      if (it == lens.end() || !l.contains_length(it->second)) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

ReducedFormula reduce_to_R(const Disjunct& d, const SolverConfig& cfg, unsigned budget_bits) {
  ReducedFormula r;
  r.width = cfg.width;
  r.alphabet = cfg.alphabet;
  r.word_eqs = d.word_eqs;
  r.diseqs = d.word_diseqs;
  r.fragment = LinearBvSystem(cfg.width);
  const std::uint64_t mask = cfg.mask();

  std::vector<std::string> subst;
  auto note = [&](const Word& w) {
    for (const Leaf& l : w)
      if (l.is_var && std::find(subst.begin(), subst.end(), subst_var(l.text)) == subst.end()) {
        subst.push_back(subst_var(l.text));
        r.substitution.emplace_back(subst_var(l.text), l.text);
      }
  };
  std::function<void(const BvTerm&)> walk = [&](const BvTerm& t) {
    switch (t.kind()) {
      case BvTerm::Kind::strlen: note(flatten(t.str())); break;
      case BvTerm::Kind::add:
        walk(t.left());
        walk(t.right());
        break;
      case BvTerm::Kind::mul: walk(t.left()); break;
      default: break;
    }
  };
  for (const Atom& a : d.atoms) {
    if (const auto* eq = std::get_if<WordEq>(&a)) {
      note(flatten(eq->lhs));
      note(flatten(eq->rhs));
    } else if (const auto* cmp = std::get_if<BvCmp>(&a)) {
      walk(cmp->lhs);
      walk(cmp->rhs);
    }
  }
  for (const auto& v : subst) r.fragment.add_var(v);

  auto word_len = [&](const Word& w) {
    LinTerm t;
    for (const Leaf& l : w) {
      if (l.is_var) t = lin_add(t, LinTerm::of_var(subst_var(l.text)), mask);
      else t.constant = (t.constant + l.text.size()) & mask;
    }
    return t;
  };
  for (const auto& cmp : d.bv_atoms)
    r.fragment.add_cmp(cmp.op, linearize(cmp.lhs, mask, subst_var), linearize(cmp.rhs, mask, subst_var));
  // Length rules of the word equations restrict the admissible assignments.
  for (const auto& eq : d.word_eqs) r.fragment.add_eq(word_len(flatten(eq.lhs)), word_len(flatten(eq.rhs)));

  r.assignments = enumerate_bv_assignments(r.fragment, subst, budget_bits);
  for (const auto& a : r.assignments) {
    std::map<std::string, LengthCongruence> m;
    for (const auto& [v, x] : r.substitution) m.emplace(x, length_congruence_of(a.at(v), cfg.width, cfg.alphabet));
    r.disjuncts.push_back(std::move(m));
  }
  return r;
}

std::optional<Model> solve_reduced(const ReducedFormula& r, const SolverConfig& cfg, const OracleConfig& o,
                                   const std::vector<std::string>& string_vars) {
  LengthFilter filter = [&](const std::vector<std::string>& vars, const std::vector<std::size_t>& lens) {
    std::map<std::string, std::size_t> m;
    for (std::size_t i = 0; i < vars.size(); ++i) m[vars[i]] = lens[i];
    return r.lengths_admitted(m);
  };
  OracleResult res = brute_force_sat(r.word_part(), o, cfg, filter, string_vars);
  if (!res.sat) return std::nullopt;
  Model m = res.model;
  LinearBvSystem pinned = r.fragment;
  for (const auto& [v, x] : r.substitution)
    pinned.add_eq(LinTerm::of_var(v), LinTerm::of_constant(m.strings.at(x).size() & cfg.mask()));
  BvCheck bv = check_bv_sat(pinned);
  if (!bv.sat) throw InternalError("admitted lengths have no bit-vector completion");
  std::set<std::string> subst;
  for (const auto& [v, x] : r.substitution) subst.insert(v);
  for (const auto& [v, val] : bv.assignment)
    if (!subst.count(v)) m.bitvecs[v] = val;
  return m;
}

namespace {

std::string oracle_slice(const Disjunct& d, const SolverConfig& cfg) {
  std::set<char> used;
  for (const auto& a : d.atoms) {
    std::function<void(const StrTerm&)> walk = [&](const StrTerm& t) {
      if (t.kind() == StrTerm::Kind::lit) used.insert(t.text().begin(), t.text().end());
      else if (t.kind() == StrTerm::Kind::concat) {
        walk(t.left());
        walk(t.right());
      }
    };
    if (const auto* e = std::get_if<WordEq>(&a)) {
      walk(e->lhs);
      walk(e->rhs);
    } else if (const auto* n = std::get_if<WordDiseq>(&a)) {
      walk(n->lhs);
      walk(n->rhs);
    }
  }
  std::string slice;
  for (std::size_t i = 0; i < cfg.alphabet.size(); ++i)
    if (i < 2 || used.count(cfg.alphabet[i])) slice.push_back(cfg.alphabet[i]);
  return slice;
}

}  // namespace

SolverResult decide_via_reduction(const Disjunct& d, const SolverConfig& cfg, std::size_t oracle_bound,
                                  const Deadline& deadline) {
  ReducedFormula r;
  try {
    r = reduce_to_R(d, cfg);
  } catch (const EnumBudgetError&) {
    return SolverResult::unknown(UnknownReason::enum_budget);
  }
  if (r.assignments.empty()) return SolverResult::unsat();
  if (deadline.expired()) return SolverResult::timeout();

  const Formula original = d.as_formula();
  const FreeVars fv = free_vars(original);
  OracleConfig o;
  o.max_len = oracle_bound;
  o.alphabet_slice = oracle_slice(d, cfg);
  o.per_check_timeout_ms = std::max(1, deadline.remaining_ms());
  std::optional<Model> m;
  try {
    m = solve_reduced(r, cfg, o, fv.strings);
  } catch (const CapExceeded&) {
    return SolverResult::unknown(UnknownReason::bound);
  } catch (const TimeoutError&) {
    return SolverResult::timeout();
  }
  if (!m) return SolverResult::unknown(UnknownReason::bound);
  Model out = restrict_to(*m, fv);
  for (const auto& v : fv.bitvecs) out.bitvecs.emplace(v, 0);
  if (!eval_formula(original, out, cfg)) throw InternalError("reduction model fails validation");
  return SolverResult::sat(std::move(out));
}

SolverResult decide_formula_via_reduction(const std::vector<Formula>& assertions, const SolverConfig& cfg,
                                          std::size_t oracle_bound, const Deadline& deadline) {
  std::vector<Disjunct> ds;
  try {
    ds = to_dnf(assertions, cfg.budgets.max_dnf);
  } catch (const DnfBudgetError&) {
    return SolverResult::unknown(UnknownReason::dnf_budget);
  }
  SolverResult acc = SolverResult::unsat();
  for (const auto& d : ds) {
    SolverResult r = decide_via_reduction(d, cfg, oracle_bound, deadline);
    if (r.status == Status::sat) {
      r.model = complete_model(*r.model, free_vars(Formula::conj(assertions)));
      return r;
    }
    if (r.status == Status::timeout) return r;
    if (r.status == Status::unknown && acc.status == Status::unsat) acc = r;
  }
  return acc;
}

std::size_t default_reduction_bound(unsigned width) {
  if (width >= 4) return 32;
  return std::max<std::size_t>(6, (std::size_t{2} << width) + 4);
}

}  // namespace strbv
