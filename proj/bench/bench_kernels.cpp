#include <benchmark/benchmark.h>
#include <omp.h>

#include "strbv/oracle.hpp"
#include "strbv/reduce.hpp"
#include "strbv/strsolve.hpp"

using namespace strbv;

namespace {

LinearBvSystem sample_fragment() {
  // v_X + v_Y = 2 v_Z + 1, v_X < v_Y over 7 bits.
  LinearBvSystem s(7);
  for (const char* v : {"v_X", "v_Y", "v_Z"}) s.add_var(v);
  LinTerm lhs = lin_add(LinTerm::of_var("v_X"), LinTerm::of_var("v_Y"), s.mask());
  LinTerm rhs = lin_add(lin_scale(LinTerm::of_var("v_Z"), 2, s.mask()), LinTerm::of_constant(1), s.mask());
  s.add_eq(lhs, rhs);
  s.add_cmp(CmpOp::lt, LinTerm::of_var("v_X"), LinTerm::of_var("v_Y"));
  return s;
}

const std::vector<std::string> kSubst{"v_X", "v_Y", "v_Z"};

void BM_EnumerateSerial(benchmark::State& state) {
  LinearBvSystem s = sample_fragment();
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_bv_assignments_serial(s, kSubst, 21));
}
BENCHMARK(BM_EnumerateSerial)->Unit(benchmark::kMillisecond);

void BM_EnumerateParallel(benchmark::State& state) {
  LinearBvSystem s = sample_fragment();
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_bv_assignments(s, kSubst, 21));
}
BENCHMARK(BM_EnumerateParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

// X Y != Y X forces a full sweep of the bounded space.
Formula commuting_diseq() {
  StrTerm x = StrTerm::var("X"), y = StrTerm::var("Y");
  return Formula::atom(WordDiseq{StrTerm::concat(x, y), StrTerm::concat(y, x)});
}

OracleConfig oracle_config() {
  OracleConfig o;
  o.max_len = 10;
  o.alphabet_slice = "ab";
  return o;
}

void BM_OracleSerial(benchmark::State& state) {
  SolverConfig cfg;
  cfg.width = 3;
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_sat_naive(commuting_diseq(), oracle_config(), cfg));
}
BENCHMARK(BM_OracleSerial)->Unit(benchmark::kMillisecond);

void BM_OracleParallel(benchmark::State& state) {
  SolverConfig cfg;
  cfg.width = 3;
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_sat(commuting_diseq(), oracle_config(), cfg));
}
BENCHMARK(BM_OracleParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_BinaryVsLinear(benchmark::State& state) {
  SolverConfig cfg;
  cfg.width = 16;
  cfg.strategy = state.range(0) ? Strategy::linear : Strategy::binary;
  StrTerm x = StrTerm::var("X"), y = StrTerm::var("Y");
  Disjunct d;
  d.add(WordEq{StrTerm::concat(StrTerm::lit("a"), x), StrTerm::concat(y, StrTerm::lit("b"))});
  d.add(BvCmp{CmpOp::gt, BvTerm::strlen(x), BvTerm::constant(8000)});
  d.add(BvCmp{CmpOp::lt, BvTerm::strlen(x), BvTerm::constant(9000)});
  for (auto _ : state) benchmark::DoNotOptimize(solve_disjunct(d, cfg, Deadline::never()));
}
BENCHMARK(BM_BinaryVsLinear)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
