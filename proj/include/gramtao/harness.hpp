#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gramtao/checker.hpp"
#include "gramtao/semantics.hpp"

namespace gramtao {

struct SutSpec {
  enum class InputMode { Stdin, FileArg };

  std::vector<std::string> command;  // argv; command[0] is the executable
  InputMode input_mode = InputMode::Stdin;
  int timeout_ms = 5000;
  bool serial = false;
};

struct Verdict {
  enum class Kind { Pass, OracleMismatch, SutCrash, SutTimeout };

  Kind kind = Kind::Pass;
  std::string actual;  // last non-empty stdout line
  std::optional<SemValue> expected;
  int exit_status = 0;

  FailureClass failure_class() const;
};

const char* verdict_name(Verdict::Kind k);

// Kind-aware comparison of the SUT's textual answer with the oracle.
// Integers compare exactly, reals within max(1e-9, 1e-9*|expected|), text
// and booleans exactly after trimming. Currency mode compares to the cent
// and tolerates a leading '$'. Unparseable text is simply inconsistent.
bool consistent(const std::string& actual, const SemValue& expected, bool currency = false);

// Feeds text to the SUT (stdin or a temp-file argument, one process per
// call), reads stdout concurrently, enforces the timeout, and judges the
// last non-empty line. Nonzero exit is SutCrash. Throws HarnessError when
// the process cannot be started at all.
Verdict run_text(const SutSpec& sut, const std::string& text, const SemValue& expected,
                 bool currency = false);

Verdict run_one(const SutSpec& sut, const TestArtifact& artifact, bool currency = false);

FailureChecker make_sut_checker(SutSpec sut, bool currency = false);

// The in-repo buggy-SUT corpus. Executables are searched in $GRAMTAO_SUT_DIR
// and next to the running binary.
struct CorpusSut {
  std::string id;
  SutSpec sut;
};

// arith_m0 (correct) through arith_m5.
std::vector<CorpusSut> corpus_mutants();

// The parking calculator SUT; pass fault flags (e.g. "daymax") to get the
// faulty variant, none for the correct one.
SutSpec corpus_parking(const std::vector<std::string>& faults = {});

std::string corpus_dir();

// Small helper for running independent work items on up to `jobs` threads.
// Item order in any shared output must be handled by the callback (index).
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

}  // namespace gramtao
