#include <doctest.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "gramtao/harness.hpp"
#include "testutil.hpp"

using namespace gramtao;

namespace {

struct CliRun {
  int exit_status = 0;
  std::string out;
};

// Drives the CLI binary through the harness runner; stdout comes back via a
// shell redirect so the whole stream (not just the last line) is visible.
CliRun cli(const std::vector<std::string>& args) {
  std::string out_file = std::filesystem::temp_directory_path() /
                         ("gramtao-cli-" + std::to_string(::getpid()) + ".out");
  std::string cmd = corpus_dir() + "/gramtao";
  for (const std::string& a : args) cmd += " '" + a + "'";
  cmd += " > " + out_file + " 2>/dev/null";

  SutSpec shell{{"/bin/sh", "-c", cmd}};
  shell.timeout_ms = 120000;
  Verdict v = run_text(shell, "", SemValue::make_text(""));
  CliRun r;
  r.exit_status = v.exit_status;
  std::ifstream in(out_file);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  std::remove(out_file.c_str());
  return r;
}

std::string sut_path(const std::string& name) { return corpus_dir() + "/" + name; }

}  // namespace

TEST_CASE("cli check: proper, rejected, missing") {
  CHECK(cli({"check", "--spec", testutil::repo_path("specs/arith.tao")}).exit_status == 0);

  std::string bad = std::filesystem::temp_directory_path() / "gramtao-bad.tao";
  {
    std::ofstream f(bad);
    f << "S ::= S\n";
  }
  CliRun r = cli({"check", "--spec", bad});
  CHECK(r.exit_status == 1);
  CHECK(r.out.find("unproductive: S") != std::string::npos);
  std::remove(bad.c_str());

  CHECK(cli({"check", "--spec", "/no/such/file.tao"}).exit_status == 2);
}

TEST_CASE("cli gen: deterministic byte-identical reports") {
  std::string spec = testutil::repo_path("specs/arith_tagged.tao");
  CliRun a = cli({"gen", "--spec", spec, "--count", "25", "--seed", "5", "--depth", "6",
                  "--report", "-"});
  CliRun b = cli({"gen", "--spec", spec, "--count", "25", "--seed", "5", "--depth", "6",
                  "--report", "-"});
  CHECK(a.exit_status == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("text: ") != std::string::npos);

  CliRun c = cli({"gen", "--spec", spec, "--count", "25", "--seed", "6", "--depth", "6",
                  "--report", "-"});
  CHECK(c.out != a.out);

  CliRun empty = cli({"gen", "--spec", spec, "--count", "0", "--report", "-"});
  CHECK(empty.exit_status == 0);
  CHECK(empty.out.empty());
}

TEST_CASE("cli gen refuses an improper grammar") {
  std::string bad = std::filesystem::temp_directory_path() / "gramtao-bad2.tao";
  {
    std::ofstream f(bad);
    f << "S ::= a\nX ::= b\n";
  }
  CHECK(cli({"gen", "--spec", bad, "--count", "1", "--report", "-"}).exit_status == 2);
  std::remove(bad.c_str());
}

TEST_CASE("cli run: correct SUT passes, mutant fails, exit codes per outcome") {
  std::string spec = testutil::repo_path("specs/arith.tao");
  CliRun ok = cli({"run", "--spec", spec, "--sut", sut_path("sut_arith_m0"), "--count", "50",
                   "--seed", "3", "--depth", "6", "--jobs", "2", "--report", "-"});
  CHECK(ok.exit_status == 0);
  CHECK(ok.out.find("verdict: pass") != std::string::npos);
  CHECK(ok.out.find("verdict: mismatch") == std::string::npos);

  CliRun bad = cli({"run", "--spec", spec, "--sut", sut_path("sut_arith_m1"), "--count", "50",
                    "--seed", "3", "--depth", "6", "--jobs", "2", "--report", "-"});
  CHECK(bad.exit_status == 1);
  CHECK(bad.out.find("verdict: mismatch") != std::string::npos);
}

TEST_CASE("cli reduce: failing artifacts gain reduction fields") {
  std::string spec = testutil::repo_path("specs/arith.tao");
  CliRun r = cli({"reduce", "--spec", spec, "--sut", sut_path("sut_arith_m1"), "--count", "40",
                  "--seed", "3", "--depth", "6", "--jobs", "2", "--jsonl", "--report", "-"});
  CHECK(r.exit_status == 1);
  CHECK(r.out.find("\"reduced_text\":") != std::string::npos);

  // every jsonl record parses and failing ones carry a reduction
  std::istringstream lines(r.out);
  std::string line;
  int reduced = 0, records = 0;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    ++records;
    CAPTURE(line);
    CHECK(line.front() == '{');
    if (line.find("\"verdict\":\"mismatch\"") != std::string::npos ||
        line.find("\"verdict\":\"crash\"") != std::string::npos) {
      CHECK(line.find("\"reduced_text\":") != std::string::npos);
      ++reduced;
    }
  }
  CHECK(records == 40);
  CHECK(reduced > 0);
}

TEST_CASE("cli reduce honors a strategies override") {
  std::string spec = testutil::repo_path("specs/arith.tao");
  CliRun r = cli({"reduce", "--spec", spec, "--sut", sut_path("sut_arith_m1"), "--count", "30",
                  "--seed", "3", "--depth", "6", "--strategies", "{\"default\"}", "--report", "-"});
  CHECK(r.exit_status == 1);
  CliRun bad = cli({"reduce", "--spec", spec, "--sut", sut_path("sut_arith_m1"), "--count", "5",
                    "--strategies", "{\"nonsense\"}", "--report", "-"});
  CHECK(bad.exit_status == 2);
}
