#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(STRBV_CLI) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("strbv_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path_ / name) << text;
    return (path_ / name).string();
  }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

const char* kWorked = R"((set-option :strlen-width 16)
(declare-const X String)
(declare-const Y String)
(assert (= (str.++ "a" X) (str.++ Y "b")))
(assert (bvult #x1f40 (str.len_bv X)))
(assert (bvult (str.len_bv X) #x2328))
(check-sat)
)";

const char* kClash = R"((set-option :strlen-width 8)
(declare-const X String)
(assert (= X "a"))
(assert (= X "b"))
(check-sat)
)";

const std::string kTraces = std::string(STRBV_DATA_DIR) + "/traces";

}  // namespace

TEST(CliSolve, WorkedExampleStats) {
  TempDir d;
  CliRun r = run("solve --strategy binary --stats " + d.write("w.smt2", kWorked));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, 4), "sat\n");
  EXPECT_NE(r.out.find(":guesses 3 "), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("(:trace X 32767 16383 8191)"), std::string::npos) << r.out;
}

TEST(CliSolve, LinearStrategyGuessesMore) {
  TempDir d;
  CliRun r = run("solve --strategy linear --stats " + d.write("w.smt2", kWorked));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find(":guesses 8002 "), std::string::npos) << r.out.substr(0, 200);
}

TEST(CliSolve, LoginTraceWitness) {
  CliRun r = run("solve --trace --model " + kTraces + "/login.trace");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, 4), "sat\n");
  EXPECT_TRUE(std::regex_search(r.out, std::regex(R"(lp[^\n]*#xfff7)"))) << r.out.substr(0, 300);
}

TEST(CliSolve, NoWrapLoginIsUnsat) {
  CliRun r = run("solve --no-wrap " + kTraces + "/login.trace");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "unsat\n");
}

TEST(CliSolve, Contradiction) {
  TempDir d;
  const std::string f = d.write("c.smt2", kClash);
  EXPECT_EQ(run("solve " + f).out, "unsat\n");
  // The reduction path only proves unsat when no length assignment exists.
  EXPECT_EQ(run("solve --mode reduction " + f).out, "unknown (bound)\n");
}

TEST(CliSolve, ReductionModeWrappedZero) {
  TempDir d;
  const std::string f = d.write("z.smt2", R"((set-option :strlen-width 2)
(declare-const X String)
(assert (= (str.len_bv X) #b00))
(assert (not (= X "")))
)");
  for (const char* mode : {"algorithm1", "reduction"}) {
    CliRun r = run(std::string("solve --model --mode ") + mode + " " + f);
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("\"aaaa\""), std::string::npos) << mode << ": " << r.out;
  }
}

TEST(CliSolve, ParseErrorExitsTwo) {
  TempDir d;
  EXPECT_EQ(run("solve " + d.write("bad.smt2", "(assert (= X")).code, 2);
  EXPECT_EQ(run("solve " + (d.path() / "missing.smt2").string()).code, 2);
  EXPECT_EQ(run("solve --strategy sideways " + d.write("ok.smt2", kClash)).code, 2);
  EXPECT_EQ(run("").code, 2);
}

TEST(CliBench, EmptyDirectoryPrintsHeader) {
  TempDir d;
  CliRun r = run("bench " + d.path().string());
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "name,strategy,result,wall_ms,guesses,arrangements\n");
}

TEST(CliBench, MissingDirectory) { EXPECT_EQ(run("bench /nonexistent/strbv").code, 2); }

TEST(CliBench, SidecarMismatchExitsOne) {
  TempDir d;
  d.write("c.smt2", kClash);
  d.write("c.smt2.expected", "sat\n");
  CliRun r = run("bench " + d.path().string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("c.smt2,binary,unsat,"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("c.smt2,linear,unsat,"), std::string::npos) << r.out;
}

TEST(CliBench, DeterministicApartFromWallTime) {
  TempDir d;
  d.write("w.smt2", kWorked);
  d.write("w.smt2.expected", "sat");
  d.write("c.smt2", kClash);
  auto strip = [](const std::string& s) {
    return std::regex_replace(s, std::regex(R"(,[0-9]+\.[0-9])"), ",T");
  };
  CliRun a = run("bench " + d.path().string());
  CliRun b = run("bench " + d.path().string());
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(strip(a.out), strip(b.out));
  EXPECT_NE(a.out.find("w.smt2,binary,sat,"), std::string::npos);
  EXPECT_NE(a.out.find("\nstrategy,result,count,min_ms,avg_ms,max_ms,guesses\n"), std::string::npos);
}

TEST(CliBench, TracesAllSat) {
  CliRun r = run("bench --strategy binary " + kTraces);
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("binary,sat,8,"), std::string::npos) << r.out;
}

TEST(CliFuzz, SmallRun) {
  CliRun r = run("fuzz --cases 20 --seed 5 --width 2");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("20"), std::string::npos) << r.out;
}
