#pragma once

// Entry points shared by the command-line tool and the tests: solving loaded
// problems, formatting statistics and running benchmark directories.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "strbv/core.hpp"
#include "strbv/frontend.hpp"
#include "strbv/libsum.hpp"
#include "strbv/strsolve.hpp"

namespace strbv {

enum class Mode { algorithm1, reduction };
std::string_view to_string(Mode m);
std::optional<Mode> parse_mode(std::string_view s);

struct SolveOptions {
  Mode mode = Mode::algorithm1;
  /// Strategy and budgets; width and alphabet come from the input.
  SolverConfig base;
  /// Oracle bound of the reduction mode; 0 selects default_reduction_bound.
  std::size_t reduction_bound = 0;
  /// Encodes trace files with the no-wrap side conditions.
  bool no_wrap = false;
};

struct SolveOutcome {
  SolverResult result;
  SolveStats stats;
  double wall_ms = 0;
};

/// Reads a `.smt2` script, or a trace program when the extension is `.trace`
/// or `as_trace` is set. Throws InputError when the file cannot be read.
Problem load_problem(const std::filesystem::path& path, const SolveOptions& o, bool as_trace = false);

SolveOutcome solve_problem(const Problem& p, const SolveOptions& o);

/// "sat", "unsat", "unknown" or "timeout"; unknown carries its reason.
std::string format_result(const SolverResult& r);
/// Counter line followed by one line per length search trace.
std::string format_stats(const SolveOutcome& out);

struct BenchRecord {
  std::string name;
  Strategy strategy = Strategy::binary;
  Status result = Status::unknown;
  double wall_ms = 0;
  std::uint64_t guesses = 0;
  std::uint64_t arrangements = 0;
};

struct BenchReport {
  std::vector<BenchRecord> records;
  /// Files whose sidecar disagrees with a completed result.
  std::vector<std::string> mismatches;

  std::string csv() const;
};

/// Solves every `.smt2` and `.trace` file of `dir` (sorted by name) once per
/// strategy. A `<file>.expected` sidecar holds the expected result word.
BenchReport run_bench(const std::filesystem::path& dir, const std::vector<Strategy>& strategies,
                      const SolveOptions& o);

}  // namespace strbv
