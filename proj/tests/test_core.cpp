#include <gtest/gtest.h>

#include "strbv/core.hpp"

using namespace strbv;

namespace {

SolverConfig width(unsigned k) {
  SolverConfig c;
  c.width = k;
  return c;
}

// Reference: integer length reduced by repeated subtraction of 2^k.
std::uint64_t slow_mod_len(std::size_t len, unsigned k) {
  std::uint64_t n = len;
  const std::uint64_t m = std::uint64_t{1} << k;
  while (n >= m) n -= m;
  return n;
}

StrTerm v(const char* n) { return StrTerm::var(n); }
StrTerm lit(const char* s) { return StrTerm::lit(s); }

}  // namespace

TEST(StrlenBv, LengthNineAtWidthThree) { EXPECT_EQ(strlen_bv_of(std::string(9, 'a'), width(3)), 1u); }

TEST(StrlenBv, Length256AtWidthEight) { EXPECT_EQ(strlen_bv_of(std::string(256, 'b'), width(8)), 0u); }

TEST(StrlenBv, EmptyStringIsZero) {
  for (unsigned k = 1; k <= 64; ++k) EXPECT_EQ(strlen_bv_of("", width(k)), 0u);
}

TEST(StrlenBv, RejectsCharacterOutsideAlphabet) {
  SolverConfig c = width(4);
  c.alphabet = "ab";
  EXPECT_THROW(strlen_bv_of("abc", c), InputError);
}

TEST(StrlenBv, HomomorphicOverConcatenation) {
  for (unsigned k = 1; k <= 8; ++k) {
    SolverConfig c = width(k);
    for (std::size_t a = 0; a <= 40; ++a)
      for (std::size_t b = 0; b <= 40; ++b) {
        std::string u(a, 'a'), w(b, 'b');
        EXPECT_EQ(strlen_bv_of(u + w, c), (strlen_bv_of(u, c) + strlen_bv_of(w, c)) % (1u << k));
      }
  }
}

TEST(StrlenBv, WrapsAroundModulus) {
  for (unsigned k = 1; k <= 8; ++k) {
    SolverConfig c = width(k);
    for (std::size_t len = 0; len < 600; ++len) EXPECT_EQ(strlen_bv_of(std::string(len, 'z'), c), slow_mod_len(len, k));
    for (std::uint64_t r = 0; r < (1u << k); ++r)
      EXPECT_EQ(strlen_bv_of(std::string(r, 'a'), c), strlen_bv_of(std::string(r + (1u << k), 'a'), c));
  }
}

TEST(BvEval, AdditionWrapsAtSixteenBits) {
  EXPECT_EQ(bv_eval(BvTerm::add(BvTerm::constant(65527), BvTerm::constant(9)), {}, width(16)), 0u);
}

TEST(BvEval, MultiplyZero) { EXPECT_EQ(bv_eval(BvTerm::mul(3, BvTerm::constant(0)), {}, width(4)), 0u); }

TEST(BvEval, NinePlusNineAtWidthFour) {
  EXPECT_EQ(bv_eval(BvTerm::add(BvTerm::constant(9), BvTerm::constant(9)), {}, width(4)), (9u + 9u) % 16u);
}

TEST(BvEval, ExhaustiveAgainstModularReference) {
  for (unsigned k = 1; k <= 5; ++k) {
    const std::uint64_t m = 1u << k;
    for (std::uint64_t a = 0; a < m; ++a)
      for (std::uint64_t b = 0; b < m; ++b)
        for (std::uint64_t c = 0; c < 7; ++c) {
          Model md;
          md.bitvecs["a"] = a;
          md.bitvecs["b"] = b;
          BvTerm t = BvTerm::add(BvTerm::mul(c, BvTerm::var("a")), BvTerm::var("b"));
          EXPECT_EQ(bv_eval(t, md, width(k)), (c * a + b) % m);
        }
  }
}

TEST(BvEval, UnassignedVariableThrows) {
  EXPECT_THROW(bv_eval(BvTerm::var("n"), {}, width(4)), EvalError);
  EXPECT_THROW(bv_eval(BvTerm::strlen(v("X")), {}, width(4)), EvalError);
}

TEST(EvalFormula, WrappedZeroLength) {
  Formula f = Formula::atom(BvCmp{CmpOp::eq, BvTerm::strlen(v("X")), BvTerm::constant(0)});
  Model m;
  m.strings["X"] = "aaaa";
  EXPECT_TRUE(eval_formula(f, m, width(2)));
  m.strings["X"] = "aaa";
  EXPECT_FALSE(eval_formula(f, m, width(2)));
}

TEST(EvalFormula, Identity) {
  Model m;
  m.strings["X"] = "ab";
  EXPECT_TRUE(eval_formula(Formula::atom(WordEq{v("X"), v("X")}), m, width(4)));
}

TEST(EvalFormula, PrefixSuffixWitness) {
  Formula f = Formula::atom(WordEq{StrTerm::concat(lit("a"), v("X")), StrTerm::concat(v("Y"), lit("b"))});
  Model m;
  m.strings = {{"X", "b"}, {"Y", "a"}};
  EXPECT_TRUE(eval_formula(f, m, width(16)));
  m.strings = {{"X", "a"}, {"Y", "a"}};
  EXPECT_FALSE(eval_formula(f, m, width(16)));
}

TEST(EvalFormula, UnsignedComparisons) {
  SolverConfig c = width(3);
  for (std::uint64_t a = 0; a < 8; ++a)
    for (std::uint64_t b = 0; b < 8; ++b) {
      auto holds = [&](CmpOp op) {
        return eval_formula(Formula::atom(BvCmp{op, BvTerm::constant(a), BvTerm::constant(b)}), {}, c);
      };
      EXPECT_EQ(holds(CmpOp::eq), a == b);
      EXPECT_EQ(holds(CmpOp::ne), a != b);
      EXPECT_EQ(holds(CmpOp::lt), a < b);
      EXPECT_EQ(holds(CmpOp::le), a <= b);
      EXPECT_EQ(holds(CmpOp::gt), a > b);
      EXPECT_EQ(holds(CmpOp::ge), a >= b);
    }
}

TEST(EvalFormula, BooleanConnectives) {
  Formula t = Formula::conj({});
  Formula f = Formula::disj({});
  EXPECT_TRUE(eval_formula(t, {}, width(2)));
  EXPECT_FALSE(eval_formula(f, {}, width(2)));
  EXPECT_TRUE(eval_formula(Formula::neg(f), {}, width(2)));
  EXPECT_TRUE(eval_formula(Formula::disj({f, t}), {}, width(2)));
  EXPECT_FALSE(eval_formula(Formula::conj({f, t}), {}, width(2)));
}

TEST(EvalFormula, UnassignedStringThrows) {
  EXPECT_THROW(eval_formula(Formula::atom(WordEq{v("X"), lit("a")}), {}, width(2)), EvalError);
}

TEST(FreeVars, WordEquation) {
  FreeVars fv =
      free_vars(Formula::atom(WordEq{StrTerm::concat(lit("a"), v("X")), StrTerm::concat(v("Y"), lit("b"))}));
  EXPECT_EQ(fv.strings, (std::vector<std::string>{"X", "Y"}));
  EXPECT_TRUE(fv.bitvecs.empty());
}

TEST(FreeVars, LengthAndBitVector) {
  FreeVars fv = free_vars(Formula::atom(BvCmp{CmpOp::eq, BvTerm::strlen(v("X")), BvTerm::var("v")}));
  EXPECT_EQ(fv.strings, (std::vector<std::string>{"X"}));
  EXPECT_EQ(fv.bitvecs, (std::vector<std::string>{"v"}));
}

TEST(FreeVars, ClosedFormula) {
  FreeVars fv = free_vars(Formula::atom(WordEq{lit("ab"), lit("ab")}));
  EXPECT_TRUE(fv.strings.empty());
  EXPECT_TRUE(fv.bitvecs.empty());
}

TEST(FreeVars, FirstOccurrenceOrderWithoutDuplicates) {
  Formula f = Formula::conj({Formula::atom(WordEq{v("Z"), StrTerm::concat(v("X"), v("Z"))}),
                             Formula::neg(Formula::atom(BvCmp{CmpOp::lt, BvTerm::var("n"), BvTerm::strlen(v("Y"))}))});
  FreeVars fv = free_vars(f);
  EXPECT_EQ(fv.strings, (std::vector<std::string>{"Z", "X", "Y"}));
  EXPECT_EQ(fv.bitvecs, (std::vector<std::string>{"n"}));
}

TEST(Words, FlattenMergesLiterals) {
  Word w = flatten(StrTerm::concat({lit("a"), lit(""), lit("b"), v("X"), lit("c")}));
  ASSERT_EQ(w.size(), 3u);
  EXPECT_EQ(w[0], lit_leaf("ab"));
  EXPECT_EQ(w[1], var_leaf("X"));
  EXPECT_EQ(w[2], lit_leaf("c"));
  EXPECT_EQ(flatten(to_term(w)), w);
  EXPECT_EQ(eval_str(to_term({}), {}), "");
}

TEST(Config, Validation) {
  SolverConfig c;
  EXPECT_NO_THROW(c.validate());
  c.alphabet = "a";
  EXPECT_THROW(c.validate(), InputError);
  c.alphabet = "aba";
  EXPECT_THROW(c.validate(), InputError);
  c = SolverConfig{};
  c.width = 0;
  EXPECT_THROW(c.validate(), InputError);
  c.width = 65;
  EXPECT_THROW(c.validate(), InputError);
  c = SolverConfig{};
  c.budgets.max_depth = 0;
  EXPECT_THROW(c.validate(), InputError);
}

TEST(Config, MaskAndCap) {
  EXPECT_EQ(width(1).mask(), 1u);
  EXPECT_EQ(width(16).mask(), 0xffffu);
  EXPECT_EQ(width(64).mask(), ~std::uint64_t{0});
  EXPECT_EQ(width(2).model_len_cap(), 3u * 4u + 16u);
}

TEST(CmpOps, NegateAndMirror) {
  for (CmpOp op : {CmpOp::eq, CmpOp::ne, CmpOp::lt, CmpOp::le, CmpOp::gt, CmpOp::ge})
    for (std::uint64_t a = 0; a < 4; ++a)
      for (std::uint64_t b = 0; b < 4; ++b) {
        EXPECT_NE(compare(op, a, b), compare(negate(op), a, b));
        EXPECT_EQ(compare(op, a, b), compare(mirror(op), b, a));
      }
}

TEST(Deadline, NeverExpires) {
  Deadline d = Deadline::never();
  EXPECT_FALSE(d.expired());
  EXPECT_NO_THROW(d.check());
  Deadline z(0);
  EXPECT_TRUE(z.expired());
  EXPECT_THROW(z.check(), TimeoutError);
}
