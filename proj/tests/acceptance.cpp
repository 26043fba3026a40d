#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>

#include <fmt/format.h>

#include "strbv/driver.hpp"
#include "strbv/frontend.hpp"
#include "strbv/libsum.hpp"
#include "strbv/oracle.hpp"
#include "strbv/reduce.hpp"
#include "strbv/strsolve.hpp"

using namespace strbv;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int n, const char* title, const std::function<Verdict()>& check) {
  const auto t0 = Clock::now();
  Verdict v;
  try {
    v = check();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  if (!v.pass) ++failures;
  std::printf("%s %d %s: %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", n, title, v.detail.c_str(), seconds_since(t0));
  std::fflush(stdout);
}

const fs::path kData = STRBV_DATA_DIR;

const char* kWorked = R"((set-option :strlen-width 16)
(declare-const X String)
(declare-const Y String)
(assert (= (str.++ "a" X) (str.++ Y "b")))
(assert (bvult #x1f40 (str.len_bv X)))
(assert (bvult (str.len_bv X) #x2328))
(check-sat)
)";

const char* kWrappedZero = R"((set-option :strlen-width 2)
(declare-const X String)
(assert (= (str.len_bv X) #b00))
(assert (not (= X "")))
(check-sat)
)";

std::string join(const std::vector<std::uint64_t>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s + "]";
}

Verdict binary_trace() {
  const auto t0 = Clock::now();
  Problem p = parse_script(kWorked);
  SolveOptions o;
  SolveOutcome out = solve_problem(p, o);
  const double secs = seconds_since(t0);
  if (out.result.status != Status::sat) return {false, "status " + std::string(to_string(out.result.status))};
  const Model& m = *out.result.model;
  if (!eval_formula(Formula::conj(p.assertions), m, p.config)) return {false, "model fails validation"};
  const std::size_t lx = m.strings.at("X").size(), ly = m.strings.at("Y").size();
  // "a"X = Y"b" with X = T"b" and Y = "a"T.
  const std::string& x = m.strings.at("X");
  const std::size_t lt = x.empty() ? 0 : x.size() - 1;
  const bool shape = !x.empty() && x.back() == 'b' && m.strings.at("Y") == "a" + x.substr(0, lt);
  std::vector<std::uint64_t> trace;
  for (const auto& t : out.stats.traces)
    if (t.var == length_var("X")) trace = t.trace;
  const bool ok = lx == 8191 && ly == 8191 && lt == 8190 && shape &&
                  trace == std::vector<std::uint64_t>{32767, 16383, 8191} && out.stats.guesses == 3 && secs < 1.0;
  return {ok, fmt::format("l_X={} l_Y={} l_T={} trace={} guesses={} time={:.3f}s", lx, ly, lt, join(trace),
                          out.stats.guesses, secs)};
}

Verdict heuristic_dominance() {
  SolveOptions o;
  o.base.budgets.timeout_ms = 20000;
  BenchReport r = run_bench(kData / "suite", {Strategy::binary, Strategy::linear}, o);
  std::map<std::string, std::map<Strategy, Status>> by_file;
  std::uint64_t gb = 0, gl = 0;
  int binary_timeouts = 0, sat = 0, unsat = 0, disagreements = 0;
  for (const auto& rec : r.records) {
    by_file[rec.name][rec.strategy] = rec.result;
    if (rec.strategy == Strategy::binary) {
      gb += rec.guesses;
      binary_timeouts += rec.result == Status::timeout;
      sat += rec.result == Status::sat;
      unsat += rec.result == Status::unsat;
    } else {
      gl += rec.guesses;
    }
  }
  for (const auto& [name, res] : by_file) {
    const Status b = res.at(Strategy::binary), l = res.at(Strategy::linear);
    const bool decided = (b == Status::sat || b == Status::unsat) && (l == Status::sat || l == Status::unsat);
    disagreements += decided && b != l;
  }
  const double ratio = gb ? static_cast<double>(gl) / static_cast<double>(gb) : 0.0;
  const bool ok = by_file.size() >= 100 && sat > 0 && unsat > 0 && gb > 0 && gl >= 10 * gb && binary_timeouts == 0 &&
                  disagreements == 0 && r.mismatches.empty();
  return {ok, fmt::format("{} instances ({} sat, {} unsat under binary), guesses binary={} linear={} ({:.0f}x), "
                          "binary timeouts={}, verdict disagreements={}, sidecar mismatches={}",
                          by_file.size(), sat, unsat, gb, gl, ratio, binary_timeouts, disagreements,
                          r.mismatches.size())};
}

Verdict overflow_detection() {
  std::vector<fs::path> traces;
  for (const auto& e : fs::directory_iterator(kData / "traces"))
    if (e.path().extension() == ".trace") traces.push_back(e.path());
  std::sort(traces.begin(), traces.end());
  int vuln_sat = 0, no_wrap_unsat = 0;
  double slowest = 0;
  std::string notes;
  std::optional<std::uint64_t> login_lp;
  for (const auto& path : traces) {
    SolveOptions o;
    Problem p = load_problem(path, o);
    SolveOutcome out = solve_problem(p, o);
    const double secs = out.wall_ms / 1000.0;
    const bool valid = out.result.status == Status::sat &&
                       eval_formula(Formula::conj(p.assertions), *out.result.model, p.config);
    const std::string name = path.stem().string();
    if (name == "login") {
      if (valid) login_lp = out.result.model->bitvecs.at("lp");
    } else if (valid && secs < 5.0) {
      ++vuln_sat;
    } else {
      notes += " " + name + ":" + std::string(to_string(out.result.status));
    }
    slowest = std::max(slowest, secs);
    SolveOptions nw;
    nw.no_wrap = true;
    Problem q = load_problem(path, nw);
    if (solve_problem(q, nw).result.status == Status::unsat) ++no_wrap_unsat;
    else notes += " " + name + ":no-wrap-not-unsat";
  }
  const bool ok = vuln_sat == 7 && login_lp == 65527u && no_wrap_unsat == static_cast<int>(traces.size());
  return {ok, fmt::format("{}/7 vulnerability traces sat and validated, slowest {:.3f}s, login lp={}, "
                          "no-wrap unsat {}/{}{}",
                          vuln_sat, slowest, login_lp ? std::to_string(*login_lp) : "none", no_wrap_unsat,
                          traces.size(), notes)};
}

// Every string over {a,b} of length 0..2^(k+1)+2, for every constant C < 2^k:
// rendered regex membership, congruence membership and strlen_bv_of(s) = C
// must agree.
Verdict congruence_exhaustive() {
  const auto t0 = Clock::now();
  const double budget = 30.0;
  std::uint64_t checked = 0, total = 0, disagreements = 0;
  for (unsigned k = 1; k <= 4; ++k) total += (std::uint64_t{2} << ((std::uint64_t{1} << (k + 1)) + 2)) - 1;
  std::string progress;
  bool timed_out = false;
  for (unsigned k = 1; k <= 4 && !timed_out; ++k) {
    SolverConfig cfg;
    cfg.width = k;
    cfg.alphabet = "ab";
    std::vector<LengthCongruence> langs;
    std::vector<RenderedRegex> regexes;
    for (std::uint64_t c = 0; c < (1u << k); ++c) {
      langs.push_back(length_congruence_of(c, k, "ab"));
      regexes.emplace_back(regex_render(langs.back()));
    }
    const std::size_t max_len = (std::size_t{1} << (k + 1)) + 2;
    std::uint64_t done_k = 0;
    for (std::size_t n = 0; n <= max_len && !timed_out; ++n) {
      std::string s(n, 'a');
      for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
        for (std::size_t i = 0; i < n; ++i) s[i] = (bits >> (n - 1 - i)) & 1 ? 'b' : 'a';
        const std::uint64_t v = strlen_bv_of(s, cfg);
        for (std::uint64_t c = 0; c < langs.size(); ++c) {
          const bool a = regexes[c].matches(s), b = congruence_contains(s, langs[c]), d = v == c;
          disagreements += !(a == b && b == d);
        }
        ++checked;
        ++done_k;
        if ((checked & 0xfff) == 0 && seconds_since(t0) > budget) {
          timed_out = true;
          break;
        }
      }
    }
    progress += fmt::format(" k={}:{}/{}", k, done_k, (std::uint64_t{2} << max_len) - 1);
  }
  const double secs = seconds_since(t0);
  const bool ok = !timed_out && disagreements == 0 && secs < budget;
  return {ok, fmt::format("{} of {} strings checked against every constant, {} disagreements{}{}", checked, total,
                          disagreements, progress,
                          timed_out ? "; the string space for k=4 cannot be enumerated within 30 s" : "")};
}

GenParams family(std::uint64_t seed) {
  GenParams g;
  g.seed = seed;
  g.n_str_vars = 1 + seed % 3;
  g.n_eqs = 1 + seed % 2;
  g.n_bv_atoms = seed % 4;
  g.width = 1 + (seed / 3) % 2;
  g.allow_diseq = seed % 5 == 0;
  g.allow_bv_var = seed % 7 == 0;
  return g;
}

Verdict equisatisfiability() {
  int cases = 0, discrepancies = 0, sat = 0;
  std::string first;
  for (std::uint64_t seed = 1; cases < 300; ++seed) {
    GenParams g = family(seed);
    Formula f = random_formula(g);
    SolverConfig cfg;
    cfg.width = g.width;
    cfg.alphabet = "ab";
    OracleConfig o;
    o.max_len = 2 * (std::size_t{1} << g.width) + 4;
    for (const Disjunct& d : to_dnf({f}, 64)) {
      if (cases == 300) break;
      ++cases;
      const Formula phi = d.as_formula();
      const bool lhs = brute_force_sat(phi, o, cfg).sat;
      ReducedFormula r = reduce_to_R(d, cfg);
      std::vector<std::string> extra;
      for (const auto& [v, x] : r.substitution) extra.push_back(x);
      LengthFilter filter = [&r](const std::vector<std::string>& vars, const std::vector<std::size_t>& lens) {
        std::map<std::string, std::size_t> m;
        for (std::size_t i = 0; i < vars.size(); ++i) m[vars[i]] = lens[i];
        return r.lengths_admitted(m);
      };
      const bool rhs = !r.disjuncts.empty() && brute_force_sat(r.word_part(), o, cfg, filter, extra).sat;
      sat += lhs;
      if (lhs != rhs) {
        ++discrepancies;
        if (first.empty()) first = "; first: " + print_formula(phi, g.width);
      }
    }
  }
  return {discrepancies == 0,
          fmt::format("{} disjuncts, {} oracle-sat, {} discrepancies{}", cases, sat, discrepancies, first)};
}

Verdict soundness() {
  const auto t0 = Clock::now();
  int cases = 0, violations = 0, sat = 0, unsat = 0;
  std::string first;
  for (unsigned batch = 0; batch < 5; ++batch) {
    GenParams g;
    g.seed = 1000 + 100 * batch;
    g.width = 1 + batch % 3;
    g.n_str_vars = batch < 3 ? 2 : 3;
    g.n_eqs = 1 + batch % 2;
    g.n_bv_atoms = 1 + batch % 3;
    g.allow_diseq = batch >= 2;
    g.allow_boolean = batch == 4;
    g.allow_bv_var = batch == 3;
    OracleConfig o;
    o.max_len = (std::size_t{1} << g.width) + 4;
    Report r = differential_run(100, g, o, 10000);
    cases += static_cast<int>(r.cases.size());
    violations += r.violations;
    for (const auto& c : r.cases) {
      sat += c.solve == Status::sat;
      unsat += c.solve == Status::unsat;
      if (!c.violation.empty() && first.empty()) first = "; first: " + c.formula + ": " + c.violation;
    }
  }
  const double secs = seconds_since(t0);
  return {cases == 500 && violations == 0 && secs < 300,
          fmt::format("{} cases (solver {} sat, {} unsat), {} violations{}", cases, sat, unsat, violations, first)};
}

Verdict wrapped_zero() {
  Problem p = parse_script(kWrappedZero);
  std::string detail;
  bool ok = true;
  for (Mode mode : {Mode::algorithm1, Mode::reduction}) {
    SolveOptions o;
    o.mode = mode;
    SolverResult r = solve_problem(p, o).result;
    const bool good = r.status == Status::sat && r.model->strings.at("X").size() == 4 &&
                      eval_formula(Formula::conj(p.assertions), *r.model, p.config);
    ok = ok && good;
    detail += fmt::format("{}: {} |X|={}; ", to_string(mode), to_string(r.status),
                          r.model ? std::to_string(r.model->strings.at("X").size()) : "-");
  }
  OracleConfig below;
  below.max_len = (std::size_t{1} << p.config.width) - 1;
  const bool integer_reading = brute_force_sat(Formula::conj(p.assertions), below, p.config).sat;
  ok = ok && !integer_reading;
  detail += fmt::format("lengths < 4: {}", integer_reading ? "model found" : "no model");
  return {ok, detail};
}

void for_each_model(const FreeVars& fv, std::size_t max_len, unsigned width, const std::function<void(const Model&)>& fn) {
  std::vector<std::string> words{""};
  for (std::size_t n = 1; n <= max_len; ++n)
    for (std::size_t bits = 0; bits < (std::size_t{1} << n); ++bits) {
      std::string s;
      for (std::size_t i = 0; i < n; ++i) s.push_back((bits >> (n - 1 - i)) & 1 ? 'b' : 'a');
      words.push_back(s);
    }
  const std::size_t ns = fv.strings.size(), nb = fv.bitvecs.size();
  std::vector<std::size_t> idx(ns + nb, 0);
  while (true) {
    Model m;
    for (std::size_t i = 0; i < ns; ++i) m.strings[fv.strings[i]] = words[idx[i]];
    for (std::size_t i = 0; i < nb; ++i) m.bitvecs[fv.bitvecs[i]] = idx[ns + i];
    fn(m);
    std::size_t i = 0;
    for (; i < idx.size(); ++i) {
      const std::size_t limit = i < ns ? words.size() : (std::size_t{1} << width);
      if (++idx[i] < limit) break;
      idx[i] = 0;
    }
    if (i == idx.size()) return;
  }
}

Verdict round_trip_and_dnf() {
  int fixpoint_failures = 0, dnf_failures = 0;
  std::uint64_t models = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    GenParams g;
    g.seed = seed;
    g.n_str_vars = 1 + seed % 3;
    g.n_eqs = seed % 3;
    g.n_bv_atoms = 1 + seed % 3;
    g.width = 1 + seed % 3;
    g.allow_diseq = true;
    g.allow_boolean = true;
    g.allow_bv_var = seed % 4 == 0;
    Formula f = random_formula(g);
    FreeVars fv = free_vars(f);
    SolverConfig cfg;
    cfg.width = g.width;
    cfg.alphabet = "ab";

    std::string header = fmt::format("(set-option :strlen-width {})\n", g.width);
    for (const auto& x : fv.strings) header += "(declare-const " + x + " String)\n";
    for (const auto& n : fv.bitvecs) header += fmt::format("(declare-const {} (_ BitVec {}))\n", n, g.width);
    const std::string printed = print_formula(f, g.width);
    Problem once = parse_script(header + "(assert " + printed + ")\n", cfg);
    const std::string reprinted = print_formula(once.assertions.at(0), g.width);
    Problem twice = parse_script(header + "(assert " + reprinted + ")\n", cfg);
    if (!(once.assertions[0] == f) || reprinted != printed || !(twice.assertions[0] == once.assertions[0]))
      ++fixpoint_failures;

    const auto dnf = to_dnf({f}, 4096);
    bool agree = true;
    for_each_model(fv, 2, g.width, [&](const Model& m) {
      bool any = false;
      for (const auto& d : dnf) any = any || eval_formula(d.as_formula(), m, cfg);
      agree = agree && any == eval_formula(f, m, cfg);
      ++models;
    });
    dnf_failures += !agree;
  }
  return {fixpoint_failures == 0 && dnf_failures == 0,
          fmt::format("200 formulas, {} fixpoint failures, {} DNF truth-table failures over {} models",
                      fixpoint_failures, dnf_failures, models)};
}

}  // namespace

int main() {
  report(1, "binary-search trace", binary_trace);
  report(2, "heuristic dominance", heuristic_dominance);
  report(3, "overflow detection", overflow_detection);
  report(4, "length-congruence exhaustive check", congruence_exhaustive);
  report(5, "equisatisfiability of the reduction", equisatisfiability);
  report(6, "differential soundness", soundness);
  report(7, "wraparound at the smallest instance", wrapped_zero);
  report(8, "round trip and DNF equivalence", round_trip_and_dnf);
  return failures == 0 ? 0 : 1;
}
