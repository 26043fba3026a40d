#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "strbv/driver.hpp"
#include "strbv/oracle.hpp"

namespace {

using namespace strbv;

void setup_logging() {
  spdlog::set_default_logger(spdlog::stderr_color_mt("strbv"));
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("STRBV_LOG")) {
    std::string v = env;
    if (v == "debug") spdlog::set_level(spdlog::level::debug);
    else if (v == "info") spdlog::set_level(spdlog::level::info);
  }
}

struct SolveArgs {
  std::string file;
  bool trace = false;
  bool no_wrap = false;
  bool model = false;
  bool stats = false;
  std::string mode = "algorithm1";
  std::string strategy = "binary";
  int timeout_ms = 20000;
  std::size_t bound = 0;
};

SolveOptions options(const std::string& mode, const std::string& strategy, int timeout_ms) {
  SolveOptions o;
  auto m = parse_mode(mode);
  if (!m) throw InputError("unknown mode '" + mode + "'");
  o.mode = *m;
  auto s = parse_strategy(strategy);
  if (!s) throw InputError("unknown strategy '" + strategy + "'");
  o.base.strategy = *s;
  o.base.budgets.timeout_ms = timeout_ms;
  return o;
}

int run_solve(const SolveArgs& a) {
  SolveOptions o = options(a.mode, a.strategy, a.timeout_ms);
  o.no_wrap = a.no_wrap;
  o.reduction_bound = a.bound;
  Problem p = load_problem(a.file, o, a.trace);
  SolveOutcome out = solve_problem(p, o);
  std::cout << format_result(out.result) << "\n";
  if (a.model && out.result.model) std::cout << print_model(*out.result.model, p.config.width);
  if (a.stats) std::cout << format_stats(out);
  return 0;
}

struct BenchArgs {
  std::string dir;
  std::string strategy = "both";
  std::string mode = "algorithm1";
  int timeout_ms = 20000;
};

int run_bench_cmd(const BenchArgs& a) {
  std::vector<Strategy> strategies;
  if (a.strategy == "both") strategies = {Strategy::binary, Strategy::linear};
  SolveOptions o = options(a.mode, a.strategy == "both" ? "binary" : a.strategy, a.timeout_ms);
  if (strategies.empty()) strategies = {o.base.strategy};
  BenchReport r = run_bench(a.dir, strategies, o);
  std::cout << r.csv();
  for (const auto& m : r.mismatches) std::cerr << "expected-result mismatch: " << m << "\n";
  return r.mismatches.empty() ? 0 : 1;
}

struct FuzzArgs {
  int cases = 100;
  std::uint64_t seed = 1;
  GenParams gen;
  std::size_t max_len = 6;
  int timeout_ms = 10000;
  bool verbose = false;
};

int run_fuzz(FuzzArgs a) {
  a.gen.seed = a.seed;
  a.gen.validate();
  OracleConfig o;
  o.max_len = a.max_len;
  Report r = differential_run(a.cases, a.gen, o, a.timeout_ms);
  for (const auto& c : r.cases)
    if (a.verbose || !c.violation.empty())
      std::cout << "seed " << c.seed << ": " << to_string(c.solve) << "/" << to_string(c.reduce) << "/"
                << to_string(c.oracle) << (c.violation.empty() ? "" : "  VIOLATION " + c.violation) << "  "
                << c.formula << "\n";
  std::cout << r.summary() << "\n";
  return r.violations == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Word equations with bit-vector string lengths"};
  app.require_subcommand(1);

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Solve an .smt2 script or a trace program");
  solve->add_option("file", sa.file, "Input file")->required();
  solve->add_flag("--trace", sa.trace, "Read the input as a trace program");
  solve->add_flag("--no-wrap", sa.no_wrap, "Exclude wraparound in trace arithmetic");
  solve->add_flag("--model", sa.model, "Print the model when sat");
  solve->add_flag("--stats", sa.stats, "Print search statistics");
  solve->add_option("--mode", sa.mode, "algorithm1 or reduction")->check(CLI::IsMember({"algorithm1", "reduction"}));
  solve->add_option("--strategy", sa.strategy, "binary or linear")->check(CLI::IsMember({"binary", "linear"}));
  solve->add_option("--timeout-ms", sa.timeout_ms, "Per-problem timeout")->check(CLI::PositiveNumber);
  solve->add_option("--bound", sa.bound, "Oracle length bound in reduction mode");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Run every .smt2 and .trace file of a directory");
  bench->add_option("dir", ba.dir, "Benchmark directory")->required();
  bench->add_option("--strategy", ba.strategy, "binary, linear or both")
      ->check(CLI::IsMember({"binary", "linear", "both"}));
  bench->add_option("--mode", ba.mode, "algorithm1 or reduction")->check(CLI::IsMember({"algorithm1", "reduction"}));
  bench->add_option("--timeout-ms", ba.timeout_ms, "Per-file timeout")->check(CLI::PositiveNumber);

  FuzzArgs fa;
  auto* fuzz = app.add_subcommand("fuzz", "Differential run against the bounded oracle");
  fuzz->add_option("--cases", fa.cases, "Number of formulas")->check(CLI::PositiveNumber);
  fuzz->add_option("--seed", fa.seed, "First seed");
  fuzz->add_option("--str-vars", fa.gen.n_str_vars, "String variables (1-3)");
  fuzz->add_option("--eqs", fa.gen.n_eqs, "Word equations (0-2)");
  fuzz->add_option("--bv-atoms", fa.gen.n_bv_atoms, "Length comparisons (0-3)");
  fuzz->add_option("--width", fa.gen.width, "Bit width (1-3)");
  fuzz->add_flag("--diseq", fa.gen.allow_diseq, "Allow disequalities");
  fuzz->add_flag("--boolean", fa.gen.allow_boolean, "Allow and/or/not structure");
  fuzz->add_flag("--bv-var", fa.gen.allow_bv_var, "Allow a free bit-vector variable");
  fuzz->add_option("--max-len", fa.max_len, "Oracle length bound");
  fuzz->add_option("--timeout-ms", fa.timeout_ms, "Solver timeout per case")->check(CLI::PositiveNumber);
  fuzz->add_flag("-v,--verbose", fa.verbose, "Print every case");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*solve) return run_solve(sa);
    if (*bench) return run_bench_cmd(ba);
    if (*fuzz) return run_fuzz(fa);
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
