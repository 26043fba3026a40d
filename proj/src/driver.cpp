#include "strbv/driver.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "strbv/reduce.hpp"

namespace strbv {

namespace fs = std::filesystem;

std::string_view to_string(Mode m) { return m == Mode::algorithm1 ? "algorithm1" : "reduction"; }

std::optional<Mode> parse_mode(std::string_view s) {
  if (s == "algorithm1") return Mode::algorithm1;
  if (s == "reduction") return Mode::reduction;
  return std::nullopt;
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c); };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

}  // namespace

Problem load_problem(const fs::path& path, const SolveOptions& o, bool as_trace) {
  const std::string text = read_file(path);
  if (as_trace || path.extension() == ".trace") {
    EmitOptions emit;
    emit.no_wrap = o.no_wrap;
    return trace_problem(parse_trace(text), o.base, emit);
  }
  return parse_script(text, o.base);
}

SolveOutcome solve_problem(const Problem& p, const SolveOptions& o) {
  SolveOutcome out;
  const auto t0 = std::chrono::steady_clock::now();
  const Deadline dl(p.config.budgets.timeout_ms);
  if (o.mode == Mode::algorithm1) {
    out.result = solve_formula(p.assertions, p.config, dl, &out.stats);
  } else {
    std::size_t bound = o.reduction_bound ? o.reduction_bound : default_reduction_bound(p.config.width);
    out.result = decide_formula_via_reduction(p.assertions, p.config, bound, dl);
  }
  out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  spdlog::debug("{}: {} in {:.1f} ms", to_string(o.mode), to_string(out.result.status), out.wall_ms);
  return out;
}

std::string format_result(const SolverResult& r) {
  if (r.status == Status::unknown && r.reason != UnknownReason::none)
    return fmt::format("unknown ({})", to_string(r.reason));
  return std::string(to_string(r.status));
}

std::string format_stats(const SolveOutcome& out) {
  std::string s = fmt::format("(:guesses {} :arrangements {} :pruned {} :max-depth {} :wall-ms {:.1f})\n",
                              out.stats.guesses, out.stats.arrangements, out.stats.pruned, out.stats.max_depth,
                              out.wall_ms);
  for (const auto& t : out.stats.traces) {
    s += "(:trace " + string_of_length_var(t.var);
    const std::size_t shown = std::min<std::size_t>(t.trace.size(), 64);
    for (std::size_t i = 0; i < shown; ++i) s += " " + std::to_string(t.trace[i]);
    if (shown < t.trace.size()) s += fmt::format(" :more {}", t.trace.size() - shown);
    s += ")\n";
  }
  return s;
}

std::string BenchReport::csv() const {
  std::string s = "name,strategy,result,wall_ms,guesses,arrangements\n";
  for (const auto& r : records)
    s += fmt::format("{},{},{},{:.1f},{},{}\n", r.name, to_string(r.strategy), to_string(r.result), r.wall_ms,
                     r.guesses, r.arrangements);
  if (records.empty()) return s;

  s += "\nstrategy,result,count,min_ms,avg_ms,max_ms,guesses\n";
  std::vector<Strategy> order;
  for (const auto& r : records)
    if (std::find(order.begin(), order.end(), r.strategy) == order.end()) order.push_back(r.strategy);
  auto row = [&](Strategy st, std::string_view label, auto pick) {
    int n = 0;
    double lo = 0, hi = 0, total = 0;
    std::uint64_t guesses = 0;
    for (const auto& r : records) {
      if (r.strategy != st || !pick(r)) continue;
      lo = n ? std::min(lo, r.wall_ms) : r.wall_ms;
      hi = n ? std::max(hi, r.wall_ms) : r.wall_ms;
      total += r.wall_ms;
      guesses += r.guesses;
      ++n;
    }
    if (n == 0) return;
    s += fmt::format("{},{},{},{:.1f},{:.1f},{:.1f},{}\n", to_string(st), label, n, lo, total / n, hi, guesses);
  };
  for (Strategy st : order) {
    for (Status res : {Status::sat, Status::unsat, Status::unknown, Status::timeout})
      row(st, to_string(res), [res](const BenchRecord& r) { return r.result == res; });
    row(st, "total", [](const BenchRecord&) { return true; });
  }
  return s;
}

BenchReport run_bench(const fs::path& dir, const std::vector<Strategy>& strategies, const SolveOptions& o) {
  if (!fs::is_directory(dir)) throw InputError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto ext = e.path().extension();
    if (e.is_regular_file() && (ext == ".smt2" || ext == ".trace")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());

  BenchReport report;
  for (const auto& f : files) {
    std::optional<std::string> expected;
    fs::path side = f;
    side += ".expected";
    if (fs::exists(side)) expected = trim(read_file(side));
    bool mismatch = false;
    for (Strategy st : strategies) {
      SolveOptions so = o;
      so.base.strategy = st;
      Problem p = load_problem(f, so);
      SolveOutcome out = solve_problem(p, so);
      BenchRecord r{f.filename().string(), st, out.result.status, out.wall_ms, out.stats.guesses,
                    out.stats.arrangements};
      if (expected && r.result != Status::timeout && to_string(r.result) != *expected) mismatch = true;
      report.records.push_back(std::move(r));
    }
    if (mismatch) report.mismatches.push_back(f.filename().string());
  }
  return report;
}

}  // namespace strbv
