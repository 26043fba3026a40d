#include <gtest/gtest.h>

#include "strbv/frontend.hpp"
#include "strbv/oracle.hpp"

using namespace strbv;

namespace {

const char* kPrefixSuffix = R"(
(set-logic QF_SBV)
(set-option :strlen-width 16)
(declare-const X String)
(declare-const Y String)
(assert (= (str.++ "a" X) (str.++ Y "b")))
(assert (bvult #x1F40 (str.len_bv X)))
(assert (bvult (str.len_bv X) #x2328))
(check-sat)
(get-model)
)";

ParseErrorKind error_kind(const std::string& text) {
  try {
    parse_script(text);
  } catch (const ParseError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no parse error for: " << text;
  return ParseErrorKind::syntax;
}

Formula atom_a() { return Formula::atom(WordEq{StrTerm::var("X"), StrTerm::lit("a")}); }
Formula atom_b() { return Formula::atom(WordEq{StrTerm::var("X"), StrTerm::lit("b")}); }
Formula atom_c() { return Formula::atom(BvCmp{CmpOp::lt, BvTerm::strlen(StrTerm::var("X")), BvTerm::constant(2)}); }

// Every assignment of strings over {a,b} up to `max_len` and bit-vector values
// below 2^width, passed to `fn`.
template <class F>
void for_each_model(const FreeVars& fv, std::size_t max_len, unsigned width, F fn) {
  std::vector<std::string> words{""};
  for (std::size_t n = 1; n <= max_len; ++n)
    for (std::size_t mask = 0; mask < (1u << n); ++mask) {
      std::string s;
      for (std::size_t i = 0; i < n; ++i) s.push_back((mask >> (n - 1 - i)) & 1 ? 'b' : 'a');
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
      std::size_t limit = i < ns ? words.size() : (std::size_t{1} << width);
      if (++idx[i] < limit) break;
      idx[i] = 0;
    }
    if (i == idx.size()) return;
  }
}

bool eval_dnf(const std::vector<Disjunct>& ds, const Model& m, const SolverConfig& cfg) {
  for (const auto& d : ds) {
    bool all = true;
    for (const auto& a : d.atoms) all = all && eval_atom(a, m, cfg);
    if (all) return true;
  }
  return false;
}

}  // namespace

TEST(ParseScript, SingleLengthAtom) {
  Problem p = parse_script(
      "(set-option :strlen-width 2)(declare-const X String)(assert (= (str.len_bv X) #b00))(check-sat)");
  EXPECT_EQ(p.config.width, 2u);
  ASSERT_EQ(p.assertions.size(), 1u);
  ASSERT_EQ(p.assertions[0].kind(), Formula::Kind::atom);
  const auto* cmp = std::get_if<BvCmp>(&p.assertions[0].as_atom());
  ASSERT_NE(cmp, nullptr);
  EXPECT_EQ(cmp->op, CmpOp::eq);
  EXPECT_EQ(cmp->lhs, BvTerm::strlen(StrTerm::var("X")));
  EXPECT_EQ(cmp->rhs, BvTerm::constant(0));
  EXPECT_EQ(p.commands, std::vector<Command>{Command::check_sat});
}

TEST(ParseScript, PrefixSuffixInstance) {
  Problem p = parse_script(kPrefixSuffix);
  EXPECT_EQ(p.config.width, 16u);
  ASSERT_EQ(p.assertions.size(), 3u);
  StrTerm x = StrTerm::var("X"), y = StrTerm::var("Y");
  EXPECT_EQ(p.assertions[0], Formula::atom(WordEq{StrTerm::concat(StrTerm::lit("a"), x),
                                                  StrTerm::concat(y, StrTerm::lit("b"))}));
  EXPECT_EQ(p.assertions[1], Formula::atom(BvCmp{CmpOp::lt, BvTerm::constant(8000), BvTerm::strlen(x)}));
  EXPECT_EQ(p.assertions[2], Formula::atom(BvCmp{CmpOp::lt, BvTerm::strlen(x), BvTerm::constant(9000)}));
  EXPECT_EQ(p.commands, (std::vector<Command>{Command::check_sat, Command::get_model}));
  ASSERT_EQ(p.symbols.declarations().size(), 2u);
}

TEST(ParseScript, LiteralForms) {
  SolverConfig c;
  c.width = 8;
  EXPECT_EQ(parse_bv_literal(parse_sexprs("#xff")[0], c), 255u);
  EXPECT_EQ(parse_bv_literal(parse_sexprs("#b00000101")[0], c), 5u);
  EXPECT_EQ(parse_bv_literal(parse_sexprs("(_ bv42 8)")[0], c), 42u);
  EXPECT_THROW(parse_bv_literal(parse_sexprs("(_ bv256 8)")[0], c), ParseError);
}

TEST(ParseScript, WidthMismatchInAddition) {
  EXPECT_EQ(error_kind("(set-option :strlen-width 8)(declare-const X String)"
                       "(assert (= (bvadd #x01 #x0001) (str.len_bv X)))"),
            ParseErrorKind::width_mismatch);
}

TEST(ParseScript, Diagnostics) {
  EXPECT_EQ(error_kind("(declare-const X String)(assert (= X \"a\"))"), ParseErrorKind::missing_width);
  EXPECT_EQ(error_kind("(set-option :strlen-width 4)(assert (= X \"a\"))"), ParseErrorKind::unknown_symbol);
  EXPECT_EQ(error_kind("(set-option :strlen-width 4)(declare-const X String)(assert (= X #x1))"),
            ParseErrorKind::sort_mismatch);
  EXPECT_EQ(error_kind("(set-option :strlen-width 4)(declare-const X String)(assert (= X \"a\")"),
            ParseErrorKind::syntax);
  EXPECT_EQ(error_kind("(set-option :strlen-width 4)(set-option :alphabet \"ab\")(declare-const X String)"
                       "(assert (= X \"c\"))"),
            ParseErrorKind::alphabet);
  EXPECT_EQ(error_kind("(set-option :strlen-width 4)(declare-const n (_ BitVec 8))"), ParseErrorKind::width_mismatch);
  EXPECT_EQ(error_kind("(set-option :strlen-width 4)(declare-const n (_ BitVec 4))"
                       "(declare-const m (_ BitVec 4))(assert (= (bvmul n m) #x0))"),
            ParseErrorKind::syntax);
}

TEST(ParseScript, DiagnosticPosition) {
  try {
    parse_script("(set-option :strlen-width 4)\n(declare-const X String)\n(assert (= Q X))");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.col(), 12);
  }
}

TEST(ParseScript, ChainedEqualityAndDistinct) {
  Problem p = parse_script(
      "(set-option :strlen-width 4)(declare-const X String)(declare-const Y String)(declare-const Z String)"
      "(assert (= X Y Z))(assert (distinct X Y Z))");
  Model m;
  m.strings = {{"X", "a"}, {"Y", "a"}, {"Z", "a"}};
  EXPECT_TRUE(eval_formula(p.assertions[0], m, p.config));
  EXPECT_FALSE(eval_formula(p.assertions[1], m, p.config));
  m.strings = {{"X", "a"}, {"Y", "b"}, {"Z", "c"}};
  EXPECT_FALSE(eval_formula(p.assertions[0], m, p.config));
  EXPECT_TRUE(eval_formula(p.assertions[1], m, p.config));
  m.strings = {{"X", "a"}, {"Y", "b"}, {"Z", "a"}};
  EXPECT_FALSE(eval_formula(p.assertions[1], m, p.config));
}

TEST(PrintScript, RoundTrip) {
  Problem p = parse_script(kPrefixSuffix);
  std::string once = print_script(p);
  Problem q = parse_script(once);
  EXPECT_EQ(print_script(q), once);
  ASSERT_EQ(q.assertions.size(), p.assertions.size());
  for (std::size_t i = 0; i < p.assertions.size(); ++i) EXPECT_EQ(q.assertions[i], p.assertions[i]);
}

TEST(PrintScript, RandomFormulasAreFixpoints) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    GenParams g;
    g.seed = seed;
    g.n_str_vars = 3;
    g.n_eqs = 2;
    g.n_bv_atoms = 2;
    g.allow_diseq = true;
    g.allow_boolean = true;
    g.allow_bv_var = true;
    Problem p;
    p.config.width = g.width;
    p.config.alphabet = "ab";
    p.assertions = {random_formula(g)};
    FreeVars fv = free_vars(p.assertions[0]);
    for (const auto& s : fv.strings) p.symbols.declare(s, Sort::string, Sexpr{});
    for (const auto& b : fv.bitvecs) p.symbols.declare(b, Sort::bitvec, Sexpr{});
    std::string text = print_script(p);
    Problem q = parse_script(text);
    EXPECT_EQ(print_script(parse_script(print_script(q))), print_script(q)) << "seed " << seed;
    EXPECT_EQ(q.assertions[0], p.assertions[0]) << "seed " << seed;
  }
}

TEST(PrintModel, DefineFunLines) {
  Model m;
  m.strings["X"] = "a\"b";
  m.bitvecs["n"] = 10;
  EXPECT_EQ(print_model(m, 8), "(define-fun X () String \"a\"\"b\")\n(define-fun n () (_ BitVec 8) #x0a)\n");
  EXPECT_EQ(print_bv_literal(5, 3), "#b101");
}

TEST(ToDnf, Distribution) {
  auto ds = to_dnf({Formula::conj({atom_a(), Formula::disj({atom_b(), atom_c()})})}, 16);
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds[0].atoms, (std::vector<Atom>{atom_a().as_atom(), atom_b().as_atom()}));
  EXPECT_EQ(ds[1].atoms, (std::vector<Atom>{atom_a().as_atom(), atom_c().as_atom()}));
}

TEST(ToDnf, NegatedLessThan) {
  BvTerm a = BvTerm::var("a"), b = BvTerm::var("b");
  auto ds = to_dnf({Formula::neg(Formula::atom(BvCmp{CmpOp::lt, a, b}))}, 16);
  ASSERT_EQ(ds.size(), 1u);
  ASSERT_EQ(ds[0].bv_atoms.size(), 1u);
  EXPECT_EQ(ds[0].bv_atoms[0], (BvCmp{CmpOp::ge, a, b}));
}

TEST(ToDnf, NegatedWordEquationBecomesDisequality) {
  auto ds = to_dnf({Formula::neg(atom_a())}, 16);
  ASSERT_EQ(ds.size(), 1u);
  ASSERT_EQ(ds[0].word_diseqs.size(), 1u);
  EXPECT_TRUE(ds[0].word_eqs.empty());
}

TEST(ToDnf, ConjunctionOfThreeAtoms) {
  auto ds = to_dnf({atom_a(), atom_b(), atom_c()}, 16);
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds[0].size(), 3u);
  EXPECT_EQ(ds[0].word_eqs.size(), 2u);
  EXPECT_EQ(ds[0].bv_atoms.size(), 1u);
}

TEST(ToDnf, BudgetExceeded) {
  std::vector<Formula> fs;
  for (int i = 0; i < 6; ++i) fs.push_back(Formula::disj({atom_a(), atom_b()}));
  EXPECT_THROW(to_dnf(fs, 32), DnfBudgetError);
  EXPECT_EQ(to_dnf(fs, 64).size(), 64u);
}

TEST(ToDnf, TruthTablesMatchOnSmallModels) {
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    GenParams g;
    g.seed = seed;
    g.n_str_vars = 2;
    g.n_eqs = 2;
    g.n_bv_atoms = 2;
    g.allow_diseq = true;
    g.allow_boolean = true;
    g.allow_bv_var = true;
    Formula f = random_formula(g);
    SolverConfig cfg;
    cfg.width = g.width;
    cfg.alphabet = "ab";
    auto ds = to_dnf({f}, 4096);
    for_each_model(free_vars(f), 3, g.width, [&](const Model& m) {
      ASSERT_EQ(eval_formula(f, m, cfg), eval_dnf(ds, m, cfg)) << "seed " << seed;
    });
  }
}
