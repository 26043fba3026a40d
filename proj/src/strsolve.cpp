#include "strbv/strsolve.hpp"

#include <algorithm>
#include <functional>

#include <spdlog/spdlog.h>

namespace strbv {

std::string to_string(const Word& w) {
  if (w.empty()) return "\"\"";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ".";
    out += w[i].is_var ? w[i].text : "\"" + w[i].text + "\"";
  }
  return out;
}

std::string to_string(const WordEquation& e) { return to_string(e.lhs) + " = " + to_string(e.rhs); }

std::string length_var(const std::string& x) { return "|" + x + "|"; }

std::string string_of_length_var(const std::string& name) {
  if (name.size() >= 2 && name.front() == '|' && name.back() == '|') return name.substr(1, name.size() - 2);
  return name;
}

LinTerm length_term(const Word& w, std::uint64_t mask) {
  LinTerm t;
  for (const Leaf& l : w) {
    if (l.is_var) t = lin_add(t, LinTerm::of_var(length_var(l.text)), mask);
    else t.constant = (t.constant + l.text.size()) & mask;
  }
  return t;
}

std::string FreshNames::next() {
  while (true) {
    std::string name = "_T" + std::to_string(++counter_);
    if (taken_.insert(name).second) return name;
  }
}

namespace {

bool contains_var(const Word& w, const std::string& x) {
  return std::any_of(w.begin(), w.end(), [&](const Leaf& l) { return l.is_var && l.text == x; });
}

Word substitute(const Word& w, const std::string& x, const Word& value) {
  if (!contains_var(w, x)) return w;
  Word out;
  for (const Leaf& l : w) {
    if (l.is_var && l.text == x) out.insert(out.end(), value.begin(), value.end());
    else out.push_back(l);
  }
  return normalized(std::move(out));
}

Word concat_words(Word a, const Word& b) {
  a.insert(a.end(), b.begin(), b.end());
  return normalized(std::move(a));
}

enum class Strip { ok, mismatch };

// Removes the common prefix and suffix of two normalized words. A mismatch of
// constant characters at either end is reported.
Strip strip(Word& a, Word& b) {
  for (int pass = 0; pass < 2; ++pass) {
    const bool front = pass == 0;
    while (!a.empty() && !b.empty()) {
      Leaf& x = front ? a.front() : a.back();
      Leaf& y = front ? b.front() : b.back();
      if (x.is_var || y.is_var) {
        if (x.is_var && y.is_var && x.text == y.text) {
          if (front) {
            a.erase(a.begin());
            b.erase(b.begin());
          } else {
            a.pop_back();
            b.pop_back();
          }
          continue;
        }
        break;
      }
      std::size_t n = std::min(x.text.size(), y.text.size());
      for (std::size_t i = 0; i < n; ++i) {
        char cx = front ? x.text[i] : x.text[x.text.size() - 1 - i];
        char cy = front ? y.text[i] : y.text[y.text.size() - 1 - i];
        if (cx != cy) return Strip::mismatch;
      }
      if (front) {
        x.text.erase(0, n);
        y.text.erase(0, n);
      } else {
        x.text.resize(x.text.size() - n);
        y.text.resize(y.text.size() - n);
      }
      if (x.text.empty()) front ? (void)a.erase(a.begin()) : a.pop_back();
      if (y.text.empty()) front ? (void)b.erase(b.begin()) : b.pop_back();
    }
  }
  return Strip::ok;
}

bool has_literal(const Word& w) {
  return std::any_of(w.begin(), w.end(), [](const Leaf& l) { return !l.is_var; });
}

// With every variable nonempty, a residual is obviously false when one side
// is empty and the other is not, or its ends disagree on a constant.
std::optional<WordEquation> usable_residual(WordEquation e) {
  if (strip(e.lhs, e.rhs) == Strip::mismatch) return std::nullopt;
  if (e.lhs.empty() != e.rhs.empty()) return std::nullopt;
  if (e.rhs.size() == 1 && e.rhs[0].is_var && !(e.lhs.size() == 1 && e.lhs[0].is_var)) std::swap(e.lhs, e.rhs);
  return e;
}

void add_len_asserts(Arrangement& a, std::uint64_t mask) {
  for (const auto& s : a.sub_eqs) a.len_asserts.push_back({length_term(s.lhs, mask), length_term(s.rhs, mask)});
}

}  // namespace

std::vector<Arrangement> gen_arrangements(const WordEquation& eq, FreshNames& fresh, unsigned width) {
  const std::uint64_t mask = LinearBvSystem(width).mask();
  WordEquation e{normalized(eq.lhs), normalized(eq.rhs)};
  std::vector<Arrangement> out;
  if (strip(e.lhs, e.rhs) == Strip::mismatch) return out;
  if (e.lhs.empty() && e.rhs.empty()) {
    out.push_back(Arrangement{eq, {}, {}, {}});
    return out;
  }
  if (e.lhs.empty() || e.rhs.empty()) return out;
  Word a = e.lhs, b = e.rhs;
  if (!a.front().is_var) std::swap(a, b);
  const std::string x = a.front().text;
  const Word r1(a.begin() + 1, a.end());
  const Word r2(b.begin() + 1, b.end());

  auto emit = [&](WordEquation def, WordEquation residual, std::vector<std::string> temps) {
    auto res = usable_residual(std::move(residual));
    if (!res) return;
    Arrangement arr{eq, {std::move(def)}, {}, std::move(temps)};
    if (!(res->lhs.empty() && res->rhs.empty())) arr.sub_eqs.push_back(std::move(*res));
    add_len_asserts(arr, mask);
    out.push_back(std::move(arr));
  };

  if (b.front().is_var) {
    const std::string y = b.front().text;
    std::string t1 = fresh.next();
    emit({{var_leaf(x)}, {var_leaf(y), var_leaf(t1)}}, {concat_words({var_leaf(t1)}, r1), r2}, {t1});
    emit({{var_leaf(x)}, {var_leaf(y)}}, {r1, r2}, {});
    std::string t2 = fresh.next();
    emit({{var_leaf(y)}, {var_leaf(x), var_leaf(t2)}}, {r1, concat_words({var_leaf(t2)}, r2)}, {t2});
  } else {
    const std::string c = b.front().text;
    for (std::size_t j = 1; j < c.size(); ++j)
      emit({{var_leaf(x)}, {lit_leaf(c.substr(0, j))}}, {r1, concat_words({lit_leaf(c.substr(j))}, r2)}, {});
    emit({{var_leaf(x)}, {lit_leaf(c)}}, {r1, r2}, {});
    std::string t = fresh.next();
    emit({{var_leaf(x)}, {lit_leaf(c), var_leaf(t)}}, {concat_words({var_leaf(t)}, r1), r2}, {t});
  }
  return out;
}

namespace {

LinearBvSystem with_asserts(const LinearBvSystem& q_l, const std::vector<const Arrangement*>& arrs) {
  LinearBvSystem sys = q_l;
  for (const Arrangement* a : arrs) {
    for (const auto& t : a->fresh) sys.add_var(length_var(t));
    for (const auto& la : a->len_asserts) sys.add_eq(la.lhs, la.rhs);
  }
  return sys;
}

// Definitions X = w of a combination form a cycle when some variable
// (transitively) occurs in its own definition.
bool cyclic_definitions(const std::vector<Arrangement>& combo) {
  std::map<std::string, std::set<std::string>> edges;
  for (const auto& a : combo) {
    for (const auto& s : a.sub_eqs) {
      if (s.lhs.size() != 1 || !s.lhs[0].is_var) continue;
      for (const Leaf& l : s.rhs)
        if (l.is_var) edges[s.lhs[0].text].insert(l.text);
    }
  }
  std::map<std::string, int> state;  // 1 = on stack, 2 = done
  std::function<bool(const std::string&)> visit = [&](const std::string& v) {
    int& s = state[v];
    if (s == 1) return true;
    if (s == 2) return false;
    s = 1;
    if (auto it = edges.find(v); it != edges.end())
      for (const auto& w : it->second)
        if (visit(w)) return true;
    state[v] = 2;
    return false;
  };
  for (const auto& [v, _] : edges)
    if (visit(v)) return true;
  return false;
}

}  // namespace

std::vector<Arrangement> prune_by_length(const std::vector<Arrangement>& arrs, const LinearBvSystem& q_l,
                                         const Deadline& deadline) {
  std::vector<Arrangement> kept;
  for (const auto& a : arrs)
    if (check_bv_sat(with_asserts(q_l, {&a}), deadline).sat) kept.push_back(a);
  return kept;
}

std::vector<MergePlan> merge_arrangements(const std::vector<WordEquation>& eqs,
                                          const std::vector<std::vector<Arrangement>>& per_eq,
                                          const LinearBvSystem& q_l, int max_dnf, const Deadline& deadline) {
  std::vector<std::string> order;
  for (const auto& e : eqs)
    for (const Word* w : {&e.lhs, &e.rhs})
      for (const Leaf& l : *w)
        if (l.is_var && std::find(order.begin(), order.end(), l.text) == order.end()) order.push_back(l.text);

  std::vector<MergePlan> plans;
  for (const auto& s : order) {
    MergePlan plan;
    plan.var = s;
    for (std::size_t i = 0; i < eqs.size(); ++i)
      if (contains_var(eqs[i].lhs, s) || contains_var(eqs[i].rhs, s)) plan.eq_indices.push_back(i);
    std::uint64_t total = 1;
    for (std::size_t i : plan.eq_indices) {
      total *= per_eq[i].size();
      if (total > static_cast<std::uint64_t>(max_dnf)) throw DnfBudgetError();
    }
    std::vector<std::size_t> digit(plan.eq_indices.size(), 0);
    for (std::uint64_t n = 0; n < total; ++n) {
      deadline.check();
      std::vector<Arrangement> combo;
      std::vector<const Arrangement*> ptrs;
      for (std::size_t j = 0; j < digit.size(); ++j) {
        combo.push_back(per_eq[plan.eq_indices[j]][digit[j]]);
        ptrs.push_back(&per_eq[plan.eq_indices[j]][digit[j]]);
      }
      for (std::size_t j = digit.size(); j-- > 0;) {
        if (++digit[j] < per_eq[plan.eq_indices[j]].size()) break;
        digit[j] = 0;
      }
      if (ptrs.size() > 1 && !check_bv_sat(with_asserts(q_l, ptrs), deadline).sat) continue;
      if (cyclic_definitions(combo)) {
        plan.overlap = true;
        continue;
      }
      plan.merged.push_back(std::move(combo));
    }
    plans.push_back(std::move(plan));
  }
  return plans;
}

// ---------------------------------------------------------------------------
// Equation systems

void EquationSystem::add_string_var(const std::string& x) {
  if (std::find(str_vars.begin(), str_vars.end(), x) != str_vars.end()) return;
  str_vars.push_back(x);
  lengths.add_var(length_var(x));
}

EquationSystem EquationSystem::from_disjunct(const Disjunct& d, const SolverConfig& cfg) {
  EquationSystem sys;
  sys.lengths = LinearBvSystem(cfg.width);
  const std::uint64_t mask = cfg.mask();

  std::function<void(const Word&)> reg_word = [&](const Word& w) {
    for (const Leaf& l : w)
      if (l.is_var) sys.add_string_var(l.text);
  };
  std::function<void(const BvTerm&)> reg_bv = [&](const BvTerm& t) {
    switch (t.kind()) {
      case BvTerm::Kind::var: sys.lengths.add_var(t.name()); break;
      case BvTerm::Kind::constant: break;
      case BvTerm::Kind::strlen: reg_word(flatten(t.str())); break;
      case BvTerm::Kind::add:
        reg_bv(t.left());
        reg_bv(t.right());
        break;
      case BvTerm::Kind::mul: reg_bv(t.left()); break;
    }
  };

  for (const Atom& atom : d.atoms) {
    if (const auto* eq = std::get_if<WordEq>(&atom)) {
      WordEquation e{flatten(eq->lhs), flatten(eq->rhs)};
      reg_word(e.lhs);
      reg_word(e.rhs);
      sys.lengths.add_eq(length_term(e.lhs, mask), length_term(e.rhs, mask));
      sys.word_eqs.push_back(std::move(e));
    } else if (const auto* ne = std::get_if<WordDiseq>(&atom)) {
      WordEquation e{flatten(ne->lhs), flatten(ne->rhs)};
      reg_word(e.lhs);
      reg_word(e.rhs);
      sys.diseqs.push_back(std::move(e));
    } else {
      const auto& cmp = std::get<BvCmp>(atom);
      reg_bv(cmp.lhs);
      reg_bv(cmp.rhs);
      sys.lengths.add_cmp(cmp.op, linearize(cmp.lhs, mask, length_var), linearize(cmp.rhs, mask, length_var));
    }
  }
  return sys;
}

EquationSystem refine(const EquationSystem& sys, const MergePlan& plan, std::size_t choice) {
  EquationSystem out = sys;
  out.word_eqs.clear();
  for (std::size_t i = 0; i < sys.word_eqs.size(); ++i)
    if (std::find(plan.eq_indices.begin(), plan.eq_indices.end(), i) == plan.eq_indices.end())
      out.word_eqs.push_back(sys.word_eqs[i]);
  for (const Arrangement& a : plan.merged.at(choice)) {
    for (const auto& t : a.fresh) {
      out.add_string_var(t);
      out.nonempty.insert(t);
    }
    for (const auto& s : a.sub_eqs) out.word_eqs.push_back(s);
    for (const auto& la : a.len_asserts) out.lengths.add_eq(la.lhs, la.rhs);
  }
  out.depth = sys.depth + 1;
  return out;
}

// ---------------------------------------------------------------------------
// Model construction

namespace {

std::string eval_word(const Word& w, const std::map<std::string, std::string>& values) {
  std::string s;
  for (const Leaf& l : w) s += l.is_var ? values.at(l.text) : l.text;
  return s;
}

}  // namespace

BuildOutcome build_model(const EquationSystem& solved, const Assignment& lengths, const SolverConfig& cfg) {
  BuildOutcome out;
  const std::uint64_t cap = cfg.model_len_cap();
  std::set<std::string> defined;
  for (const auto& [x, w] : solved.definitions) defined.insert(x);

  std::map<std::string, std::string> values;
  std::vector<std::string> free;
  for (const auto& x : solved.str_vars) {
    if (solved.empty.count(x)) {
      values[x] = "";
      continue;
    }
    if (defined.count(x)) continue;
    auto it = lengths.find(length_var(x));
    unsigned __int128 len = it == lengths.end() ? 0 : it->second;
    if (len == 0 && solved.nonempty.count(x)) len = static_cast<unsigned __int128>(cfg.mask()) + 1;
    if (len > cap) {
      out.result = SolverResult::unknown(UnknownReason::model_len);
      return out;
    }
    values[x] = std::string(static_cast<std::size_t>(len), cfg.alphabet.front());
    free.push_back(x);
  }

  auto violated = [&] {
    int n = 0;
    for (const auto& d : solved.diseqs)
      if (eval_word(d.lhs, values) == eval_word(d.rhs, values)) ++n;
    return n;
  };
  int bad = violated();
  int attempts = 0;
  while (bad > 0) {
    bool improved = false;
    for (const auto& d : solved.diseqs) {
      if (improved || eval_word(d.lhs, values) != eval_word(d.rhs, values)) continue;
      std::vector<std::string> vars;
      for (const Word* w : {&d.lhs, &d.rhs})
        for (const Leaf& l : *w)
          if (l.is_var && std::find(vars.begin(), vars.end(), l.text) == vars.end()) vars.push_back(l.text);
      if (vars.empty()) {
        out.result = SolverResult::unsat();
        return out;
      }
      for (const auto& y : vars) {
        if (improved) break;
        std::string& s = values[y];
        const std::uint64_t period = cfg.mask() + 1;
        if (s.empty() && period != 0 && period <= cap && std::find(free.begin(), free.end(), y) != free.end()) {
          s.assign(static_cast<std::size_t>(period), cfg.alphabet.front());
          int now = violated();
          if (now < bad) {
            bad = now;
            improved = true;
            break;
          }
          s.clear();
        }
        for (std::size_t p = 0; p < s.size() && !improved; ++p) {
          if (attempts++ >= cfg.budgets.max_diseq_flips) {
            out.result = SolverResult::unknown(UnknownReason::diseq_budget);
            return out;
          }
          char old = s[p];
          std::size_t idx = cfg.alphabet.find(old);
          s[p] = cfg.alphabet[(idx + 1) % cfg.alphabet.size()];
          int now = violated();
          if (now < bad) {
            bad = now;
            improved = true;
          } else {
            s[p] = old;
          }
        }
      }
    }
    if (!improved) {
      out.result = SolverResult::unknown(UnknownReason::diseq_budget);
      return out;
    }
  }

  for (const auto& [x, w] : solved.definitions) values[x] = eval_word(w, values);
  for (auto& [x, v] : values) out.full.strings[x] = v;
  for (const auto& [name, v] : lengths)
    if (string_of_length_var(name) == name) out.full.bitvecs[name] = v;
  out.result = SolverResult::sat(out.full);
  return out;
}

// ---------------------------------------------------------------------------
// The recursive procedure

namespace {

SolverResult combine(const SolverResult& a, const SolverResult& b) {
  if (a.status == Status::sat) return a;
  if (b.status == Status::sat) return b;
  if (a.status == Status::unknown) return a;
  if (b.status == Status::unknown) return b;
  return SolverResult::unsat();
}

class Engine {
 public:
  Engine(const Disjunct& d, const SolverConfig& cfg, const Deadline& dl, SolveStats& stats)
      : cfg_(cfg), dl_(dl), stats_(stats), original_(d.as_formula()), free_(free_vars(original_)) {}

  SolverResult run(EquationSystem sys) { return rec(std::move(sys)); }

 private:
  void substitute_everywhere(EquationSystem& sys, const std::string& x, const Word& value) const {
    for (auto& e : sys.word_eqs) {
      e.lhs = substitute(e.lhs, x, value);
      e.rhs = substitute(e.rhs, x, value);
    }
    for (auto& e : sys.diseqs) {
      e.lhs = substitute(e.lhs, x, value);
      e.rhs = substitute(e.rhs, x, value);
    }
    for (auto& [y, w] : sys.definitions) w = substitute(w, x, value);
  }

  void force_empty(EquationSystem& sys, const std::string& x) const {
    sys.empty.insert(x);
    substitute_everywhere(sys, x, {});
    sys.lengths.add_eq(LinTerm::of_var(length_var(x)), LinTerm::of_constant(0));
  }

  // Integer lower bound on the length of a side, and whether it is constant.
  std::pair<std::uint64_t, bool> min_length(const EquationSystem& sys, const Word& w) const {
    std::uint64_t n = 0;
    bool constant = true;
    for (const Leaf& l : w) {
      if (l.is_var) {
        constant = false;
        if (sys.nonempty.count(l.text)) ++n;
      } else {
        n += l.text.size();
      }
    }
    return {n, constant};
  }

  bool simplify(EquationSystem& sys) const {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < sys.word_eqs.size() && !changed; ++i) {
        WordEquation e = sys.word_eqs[i];
        if (strip(e.lhs, e.rhs) == Strip::mismatch) return false;
        if (e.lhs.empty() && e.rhs.empty()) {
          sys.word_eqs.erase(sys.word_eqs.begin() + static_cast<long>(i));
          changed = true;
          break;
        }
        if (e.lhs.empty() || e.rhs.empty()) {
          const Word& other = e.lhs.empty() ? e.rhs : e.lhs;
          if (has_literal(other)) return false;
          std::vector<std::string> vars;
          for (const Leaf& l : other) {
            if (sys.nonempty.count(l.text)) return false;
            vars.push_back(l.text);
          }
          sys.word_eqs.erase(sys.word_eqs.begin() + static_cast<long>(i));
          for (const auto& v : vars)
            if (!sys.empty.count(v)) force_empty(sys, v);
          changed = true;
          break;
        }
        auto [la, ca] = min_length(sys, e.lhs);
        auto [lb, cb] = min_length(sys, e.rhs);
        if ((ca && lb > la) || (cb && la > lb)) return false;
        sys.word_eqs[i] = std::move(e);
      }
    }
    std::vector<WordEquation> kept;
    for (WordEquation d : sys.diseqs) {
      if (strip(d.lhs, d.rhs) == Strip::mismatch) continue;
      if (d.lhs.empty() && d.rhs.empty()) return false;
      kept.push_back(std::move(d));
    }
    sys.diseqs = std::move(kept);
    return true;
  }

  std::optional<std::string> undecided(const EquationSystem& sys) const {
    for (const auto* list : {&sys.word_eqs, &sys.diseqs})
      for (const auto& e : *list)
        for (const Word* w : {&e.lhs, &e.rhs})
          for (const Leaf& l : *w)
            if (l.is_var && !sys.nonempty.count(l.text) && !sys.empty.count(l.text)) return l.text;
    return std::nullopt;
  }

  bool eliminate_one(EquationSystem& sys) const {
    for (std::size_t i = 0; i < sys.word_eqs.size(); ++i) {
      const WordEquation& e = sys.word_eqs[i];
      for (int side = 0; side < 2; ++side) {
        const Word& single = side == 0 ? e.lhs : e.rhs;
        const Word& other = side == 0 ? e.rhs : e.lhs;
        if (single.size() != 1 || !single[0].is_var || contains_var(other, single[0].text)) continue;
        std::string x = single[0].text;
        Word value = other;
        sys.word_eqs.erase(sys.word_eqs.begin() + static_cast<long>(i));
        substitute_everywhere(sys, x, value);
        sys.definitions.emplace_back(x, std::move(value));
        return true;
      }
    }
    return false;
  }

  static std::string signature(const EquationSystem& sys) {
    std::vector<std::string> parts;
    for (const auto& e : sys.word_eqs) {
      std::map<std::string, int> names;
      std::string s;
      for (const Word* w : {&e.lhs, &e.rhs}) {
        for (const Leaf& l : *w) {
          if (l.is_var) {
            auto [it, _] = names.emplace(l.text, static_cast<int>(names.size()));
            s += "v" + std::to_string(it->second) + ".";
          } else {
            s += "\"" + l.text + "\".";
          }
        }
        if (w == &e.lhs) s += "=";
      }
      parts.push_back(std::move(s));
    }
    std::sort(parts.begin(), parts.end());
    std::string out;
    for (const auto& p : parts) out += p + ";";
    return out;
  }

  SolverResult finish(const EquationSystem& sys) {
    Assignment hints;
    for (const auto& x : sys.nonempty) hints[length_var(x)] = 1;
    LengthSolution ls = solve_lengths(sys.lengths, cfg_.strategy, dl_, hints);
    stats_.guesses += ls.guesses;
    if (ls.status == LengthSolution::Status::timeout) throw TimeoutError();
    if (ls.status != LengthSolution::Status::sat) return SolverResult::unsat();
    BuildOutcome b = build_model(sys, ls.values, cfg_);
    if (b.result.status != Status::sat) return b.result;
    Model m;
    for (const auto& x : free_.strings) m.strings[x] = b.full.strings.count(x) ? b.full.strings.at(x) : "";
    for (const auto& v : free_.bitvecs) m.bitvecs[v] = ls.values.count(v) ? ls.values.at(v) : 0;
    if (!eval_formula(original_, m, cfg_)) throw InternalError("constructed model fails validation");
    stats_.traces = ls.traces;
    return SolverResult::sat(std::move(m));
  }

  SolverResult rec(EquationSystem sys) {
    dl_.check();
    stats_.max_depth = std::max(stats_.max_depth, sys.depth);
    while (true) {
      if (!simplify(sys)) return SolverResult::unsat();
      if (!check_bv_sat(sys.lengths, dl_).sat) return SolverResult::unsat();
      if (auto u = undecided(sys)) {
        EquationSystem as_empty = sys;
        force_empty(as_empty, *u);
        SolverResult r1 = rec(std::move(as_empty));
        if (r1.status == Status::sat) return r1;
        sys.nonempty.insert(*u);
        return combine(r1, rec(std::move(sys)));
      }
      if (!eliminate_one(sys)) break;
    }
    if (sys.word_eqs.empty()) return finish(sys);

    for (const auto& e : sys.word_eqs)
      for (const Leaf& l : e.lhs)
        if (l.is_var && contains_var(e.rhs, l.text)) return SolverResult::unknown(UnknownReason::overlap);
    if (sys.depth > cfg_.budgets.max_depth) return SolverResult::unknown(UnknownReason::overlap);
    std::string sig = signature(sys);
    if (std::find(path_.begin(), path_.end(), sig) != path_.end()) return SolverResult::unknown(UnknownReason::overlap);
    path_.push_back(sig);
    SolverResult r = expand(sys);
    path_.pop_back();
    return r;
  }

  SolverResult expand(const EquationSystem& sys) {
    std::set<std::string> taken(sys.str_vars.begin(), sys.str_vars.end());
    FreshNames fresh(taken, sys.fresh_counter);
    std::vector<std::vector<Arrangement>> per_eq;
    for (const auto& e : sys.word_eqs) {
      auto arrs = gen_arrangements(e, fresh, cfg_.width);
      auto kept = prune_by_length(arrs, sys.lengths, dl_);
      stats_.arrangements += arrs.size();
      stats_.pruned += arrs.size() - kept.size();
      if (kept.empty()) return SolverResult::unsat();
      per_eq.push_back(std::move(kept));
    }
    std::vector<MergePlan> plans;
    try {
      plans = merge_arrangements(sys.word_eqs, per_eq, sys.lengths, cfg_.budgets.max_dnf, dl_);
    } catch (const DnfBudgetError&) {
      return SolverResult::unknown(UnknownReason::dnf_budget);
    }
    const MergePlan* chosen = nullptr;
    for (const auto& p : plans) {
      if (!p.merged.empty()) {
        chosen = &p;
        break;
      }
      if (!p.overlap) return SolverResult::unsat();
    }
    if (!chosen) return SolverResult::unknown(UnknownReason::overlap);
    spdlog::debug("depth {}: splitting on {} ({} combinations)", sys.depth, chosen->var, chosen->merged.size());
    SolverResult acc = SolverResult::unsat();
    if (chosen->overlap) acc = SolverResult::unknown(UnknownReason::overlap);
    for (std::size_t i = 0; i < chosen->merged.size(); ++i) {
      EquationSystem child = refine(sys, *chosen, i);
      child.fresh_counter = fresh.counter();
      SolverResult r = rec(std::move(child));
      if (r.status == Status::sat) return r;
      acc = combine(acc, r);
    }
    return acc;
  }

  const SolverConfig& cfg_;
  const Deadline& dl_;
  SolveStats& stats_;
  Formula original_;
  FreeVars free_;
  std::vector<std::string> path_;
};

}  // namespace

SolverResult solve_disjunct(const Disjunct& d, const SolverConfig& cfg, const Deadline& deadline, SolveStats* stats) {
  SolveStats local;
  SolveStats& st = stats ? *stats : local;
  Engine engine(d, cfg, deadline, st);
  try {
    return engine.run(EquationSystem::from_disjunct(d, cfg));
  } catch (const TimeoutError&) {
    return SolverResult::timeout();
  }
}

SolverResult solve_formula(const std::vector<Formula>& assertions, const SolverConfig& cfg, const Deadline& deadline,
                           SolveStats* stats) {
  std::vector<Disjunct> ds;
  try {
    ds = to_dnf(assertions, cfg.budgets.max_dnf);
  } catch (const DnfBudgetError&) {
    return SolverResult::unknown(UnknownReason::dnf_budget);
  }
  SolverResult acc = SolverResult::unsat();
  for (const auto& d : ds) {
    SolverResult r = solve_disjunct(d, cfg, deadline, stats);
    if (r.status == Status::sat) {
      r.model = complete_model(*r.model, free_vars(Formula::conj(assertions)));
      return r;
    }
    if (r.status == Status::timeout) return r;
    if (r.status == Status::unknown && acc.status == Status::unsat) acc = r;
  }
  return acc;
}

}  // namespace strbv
